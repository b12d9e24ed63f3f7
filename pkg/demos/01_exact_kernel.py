"""
Exact comparisons on sums of rational multiples of powers of e
==============================================================

Every number the library handles is ``r + sum m_n q_n e**n`` with rational
``r, q_n`` and integer ``m_n``.  Such a number is zero only when it is
syntactically zero, so its sign can always be found by tightening enclosures.
"""

from decimal import Decimal, localcontext
from fractions import Fraction

from steinhaus import Ordering, ThetaDescriptor, cmp_exact, new_basis, power_enclosure, theta_enclosure
from steinhaus.kernel import to_decimal_string

# %% Enclosures of e nest as the precision grows
for bits in (4, 16, 64):
    enc = theta_enclosure(ThetaDescriptor.E, bits)
    print(f"{bits:3d} bits: [{float(enc.lo):.17f}, {float(enc.hi):.17f}]  width 2^-{bits}")

e2 = power_enclosure(ThetaDescriptor.E, 2, 200)
with localcontext() as ctx:
    ctx.prec = 50
    print("e^2 lies in", Decimal(e2.lo.numerator) / e2.lo.denominator, "(to within 2^-200)")

# %% A basis fixes the rationals q_n; b_n = q_n e**n
basis = new_basis("1/20")
basis.ensure(10)
print("q_0..q_4 =", [str(q) for q in basis.q[:5]])
print("b_1 ~", to_decimal_string({1: 1}, basis, 30))

# %% Comparing values that agree to many digits
near_b1 = Fraction(to_decimal_string({1: 1}, basis, 40))
print("b_1 vs its 40-digit truncation:", cmp_exact({1: 1}, near_b1, basis).name)
print("b_2 vs b_0:", cmp_exact({2: 1}, {0: 1}, basis).name)
assert cmp_exact({3: 2, 0: -1}, {3: 2, 0: -1}, basis) is Ordering.EQUAL
