"""
Greedy decomposition of C = [0, 1) n G
======================================

The endpoint 0 is in G, so the first translate is ``-b_0 + B``.  Each later
step takes the first point of C not yet covered and puts a fresh translate of
B through it, disjoint from all earlier ones and inside the interval.
"""

from steinhaus import decompose, parse_interval, verify_decomposition
from steinhaus.kernel import to_float

d = decompose(parse_interval("[0,1)"), "1/20", 40)
for (j, l), t in zip(d.coverage_log[:10], d.translates):
    print(f"a_{j:<2d} = {t.offset!r:24s} ~ {to_float(t.offset, d.basis):+.6f}   placed through x_{l}")

# %% Qualified candidates per step stay within 2k + 1
print("scan counts:", [n for _, n in d.scan_log])

# %% Exact verification of disjointness, coverage and uniqueness
report = verify_decomposition(d, 40, 25)
print(report.checks)
