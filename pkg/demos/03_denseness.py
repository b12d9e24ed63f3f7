"""
Finding points of G in short intervals
======================================

Combinations ``n0 b0 + n1 b1`` are dense because ``b1 / b0`` is irrational.
Short vectors come from a height-ordered scan; very short intervals fall back
to continued-fraction convergents of the ratio.
"""

from fractions import Fraction

from steinhaus import RealInterval, find_group_element_in, new_basis
from steinhaus.kernel import to_decimal_string

basis = new_basis("1/20")

for width in (Fraction(1, 10), Fraction(1, 10**3), Fraction(1, 10**5), Fraction(1, 10**7)):
    lo = Fraction(1, 3)
    g = find_group_element_in(RealInterval(lo, lo + width), basis)
    print(f"width {float(width):.0e}: {g!r:28s} = {to_decimal_string(g, basis, 20)}")
