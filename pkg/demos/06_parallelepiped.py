"""
Squares and parallelograms
==========================

A box decomposes axis by axis; product translates are index tuples into the
per-axis lists.  A rational linear map carries the whole picture over to a
parallelogram, and all queries on the image are answered on the preimage.
"""

from steinhaus import (
    CEnumeration,
    RationalMatrix,
    apply_linear_map,
    decompose,
    parse_interval,
    product_decompose,
    verify_mapped,
    verify_product,
)
from steinhaus.product import grid_points

axes = [decompose(parse_interval("[0,1)"), "1/20", 12), decompose(parse_interval("(0,1]"), "1/20", 12)]
prod = product_decompose(axes)
enums = [CEnumeration(d.J, d.basis) for d in axes]
print(len(prod.translates), "product translates")
print("box:", verify_product(prod.translates, enums, 8, 5).checks)

# %% Shear the square into a parallelogram
T = RationalMatrix.from_json([["1", "1/2"], ["0", "1"]])
image = verify_mapped([apply_linear_map(T, t) for t in prod.translates],
                      [apply_linear_map(T, p) for p in grid_points(enums, 8)], 5)
print("parallelogram:", image.checks)
