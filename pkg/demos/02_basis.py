"""
The set B: two accumulation points and shrinking windows
========================================================

Even-indexed ``b_n`` crowd just above ``b_0`` and odd-indexed ones just below
``b_1``.  The window for index ``2n`` or ``2n + 1`` has width ``eps' / n``.
"""

from steinhaus import new_basis, verify_basis_properties
from steinhaus.kernel import to_float

basis = new_basis("1/20")
basis.ensure(20)
print(f"epsilon = {basis.epsilon}, beta0 = {basis.beta0}, beta1 = {basis.beta1}, eps' = {basis.eps_prime}")

# %% Distances to the accumulation points
b0, b1 = to_float({0: 1}, basis), to_float({1: 1}, basis)
for m in range(2, 21):
    v = to_float({m: 1}, basis)
    anchor = b0 if m % 2 == 0 else b1
    print(f"b_{m:<2d} = {v:+.12f}   |b_m - b_{m % 2}| = {abs(v - anchor):.3e}   q = {basis.q[m]}")

# %% Exact re-check of every window
report = verify_basis_properties(basis, 20)
print("windows hold:", report.passed)
