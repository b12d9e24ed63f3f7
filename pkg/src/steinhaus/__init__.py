"""Exact construction of a set meeting every translate of C in one point.

``C`` is the subgroup ``{sum n_k e^k : n_k in Z}`` of the reals, ``B`` is a
sequence ``b_n = q_n e^n`` with rational ``q_n``, and the engine builds
translates ``a_j + B`` that tile ``C`` intersected with an interval.
"""

__version__ = "0.1.0"

from .basis import BasisSpec, extend_basis, new_basis, verify_basis_properties
from .engine import (
    CEnumeration,
    Decomposition,
    decompose,
    enumerate_C,
    find_covering_translate,
    find_uncovered_point,
    verify_decomposition,
)
from .errors import (
    CandidateBoundExceeded,
    DimensionMismatch,
    HeightCapExceeded,
    IntervalTooShort,
    InvalidEpsilon,
    InvariantViolation,
    KernelError,
    ParseError,
    PrecisionExhausted,
    SingularMatrix,
    SteinhausError,
    UnknownBasisIndex,
    UsageError,
)
from .group import (
    ExactPoint,
    GroupElement,
    RealInterval,
    Translate,
    find_group_element_in,
    iter_group_elements_in,
    parse_interval,
    point_in_interval,
    translate_contains,
    translates_disjoint,
)
from .kernel import (
    Ordering,
    RealEnclosure,
    ThetaDescriptor,
    cmp_exact,
    eval_enclosure,
    power_enclosure,
    precision_cap,
    theta_enclosure,
)
from .product import (
    Mapped,
    ParallelepipedSpec,
    PointND,
    ProductDecomposition,
    RationalMatrix,
    TranslateND,
    apply_linear_map,
    decompose_box,
    product_decompose,
    pullback,
    verify_mapped,
    verify_product,
)
