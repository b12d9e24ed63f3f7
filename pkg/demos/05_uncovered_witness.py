"""
No finite family of translates covers C
=======================================

Given any finite set of disjoint translates inside J, a gap between the
endpoint strips holds points of C that none of them contains.
"""

from steinhaus import decompose, find_uncovered_point, parse_interval, translate_contains
from steinhaus.kernel import to_float

d = decompose(parse_interval("[0,1)"), "1/20", 60)
for k in (1, 5, 20, 61):
    g = find_uncovered_point(d.translates[:k], d.J, d.basis)
    hit = any(translate_contains(t, g) for t in d.translates[:k])
    print(f"first {k:2d} translates miss {g!r} ~ {to_float(g, d.basis):.6f} (covered: {hit})")
