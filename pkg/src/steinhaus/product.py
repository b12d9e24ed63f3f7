"""Decompositions of boxes and parallelepipeds in R^n.

A box ``I_1 x ... x I_n`` is handled axis by axis: each axis gets its own
basis and decomposition, and product translates are index tuples into the
per-axis translate lists.  Two product translates meet only if they meet on
every axis.  A parallelepiped is the image of a box under an invertible
rational matrix ``T``; mapped objects keep ``(T, preimage)`` and every query
on them is answered on the preimage after pulling back through ``T^-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .basis import new_basis
from .engine import CEnumeration, Decomposition, decompose
from .errors import DimensionMismatch, InvariantViolation, SingularMatrix, UsageError
from .group import GroupElement, Translate, parse_interval, translate_contains, translates_disjoint
from .kernel import format_rational, parse_rational, to_float


@dataclass(frozen=True)
class PointND:
    coords: tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))

    @property
    def dimension(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class TranslateND:
    """``offsets + B_1 x ... x B_n``."""

    offsets: tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "offsets", tuple(self.offsets))

    @property
    def dimension(self) -> int:
        return len(self.offsets)

    def contains(self, p: PointND) -> bool:
        _same_dimension(self, p)
        return all(translate_contains(Translate(a), x) for a, x in zip(self.offsets, p.coords))


def _same_dimension(*objs) -> int:
    dims = {o.dimension for o in objs}
    if len(dims) != 1:
        raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
    return dims.pop()


def product_translates_disjoint(t: TranslateND, u: TranslateND) -> bool:
    _same_dimension(t, u)
    return any(translates_disjoint(Translate(a), Translate(b)) for a, b in zip(t.offsets, u.offsets))


@dataclass
class ProductDecomposition:
    axes: list[Decomposition]
    prefixes: tuple[int, ...]
    translates: list[TranslateND] = field(default_factory=list)
    index_tuples: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.axes)


def product_decompose(per_axis: Sequence[Decomposition],
                      prefixes: Sequence[int] | None = None) -> ProductDecomposition:
    """All product translates over the first ``prefixes[i]`` translates of each axis."""
    if not per_axis:
        raise UsageError("need at least one axis")
    if prefixes is None:
        prefixes = [len(d.translates) for d in per_axis]
    if len(prefixes) != len(per_axis):
        raise DimensionMismatch(f"{len(prefixes)} prefixes for {len(per_axis)} axes")
    for d, k in zip(per_axis, prefixes):
        if not 1 <= k <= len(d.translates):
            raise UsageError(f"prefix {k} out of range for an axis with {len(d.translates)} translates")
        ts = d.translates[:k]
        for (i, t), (j, u) in itertools.combinations(enumerate(ts), 2):
            if not translates_disjoint(t, u):
                raise InvariantViolation(f"axis translates {i} and {j} intersect")
    out = ProductDecomposition(list(per_axis), tuple(prefixes))
    for idx in itertools.product(*(range(k) for k in prefixes)):
        out.index_tuples.append(idx)
        out.translates.append(TranslateND(tuple(d.translates[i].offset for d, i in zip(per_axis, idx))))
    return out


@dataclass
class ProductReport:
    passed: bool
    checks: dict[str, bool]
    failure: str | None = None
    witness: object = None

    def __bool__(self) -> bool:
        return self.passed


def grid_points(enumerations: Sequence[CEnumeration], n_points_per_axis: int) -> list[PointND]:
    axes = [e.extend(n_points_per_axis).emitted[:n_points_per_axis] for e in enumerations]
    return [PointND(c) for c in itertools.product(*axes)]


def _check_points(translates: Sequence[TranslateND], points: Sequence[PointND], n_basis: int) -> ProductReport:
    checks = {}
    if translates:
        _same_dimension(*translates, *points)
    for p in points:
        owners = [i for i, t in enumerate(translates) if t.contains(p)]
        if len(owners) != 1:
            checks["coverage"] = False
            return ProductReport(False, checks, f"point {p.coords} lies in {len(owners)} translates",
                                 (p.coords, owners))
    checks["coverage"] = True

    seen: dict[tuple, tuple] = {}
    if translates:
        dim = translates[0].dimension
        units = [GroupElement.unit(p) for p in range(n_basis + 1)]
        for i, t in enumerate(translates):
            for ps in itertools.product(range(n_basis + 1), repeat=dim):
                v = tuple(a + units[p] for a, p in zip(t.offsets, ps))
                if v in seen:
                    checks["unique"] = False
                    return ProductReport(False, checks, f"translate {i} at {ps} repeats {seen[v]}",
                                         (seen[v], (i, ps)))
                seen[v] = (i, ps)
    checks["unique"] = True
    return ProductReport(True, checks)


def verify_product(translates: Sequence[TranslateND], enumerations: Sequence[CEnumeration],
                   n_points_per_axis: int, n_basis: int) -> ProductReport:
    """Every point of the grid of per-axis enumeration prefixes is in exactly one
    product translate, and ``a + (b_p1, ..., b_pn)`` never repeats for ``p_i <= n_basis``."""
    return _check_points(translates, grid_points(enumerations, n_points_per_axis), n_basis)


# --- rational linear maps ----------------------------------------------------

@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(parse_rational(x) for x in r) for r in self.rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise DimensionMismatch("matrix must be square and nonempty")
        object.__setattr__(self, "rows", rows)
        if self.det() == 0:
            raise SingularMatrix("matrix is singular")

    @property
    def dimension(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    def det(self) -> Fraction:
        a = [list(r) for r in self.rows]
        n = len(a)
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            det *= a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] / a[c][c]
                if f:
                    for k in range(c, n):
                        a[r][k] -= f * a[c][k]
        return det

    def inverse(self) -> RationalMatrix:
        n = self.dimension
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            piv = next(r for r in range(c, n) if a[r][c] != 0)
            a[c], a[piv] = a[piv], a[c]
            p = a[c][c]
            a[c] = [x / p for x in a[c]]
            for r in range(n):
                if r != c and a[r][c]:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return RationalMatrix(tuple(tuple(r[n:]) for r in a))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if other.dimension != self.dimension:
            raise DimensionMismatch("matrix dimensions differ")
        cols = list(zip(*other.rows))
        return RationalMatrix(tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in cols)
                                    for r in self.rows))

    def apply(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(sum(x * y for x, y in zip(r, v)) for r in self.rows)

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, rows) -> RationalMatrix:
        return cls(tuple(tuple(parse_rational(x) for x in r) for r in rows))


@dataclass(frozen=True)
class Mapped:
    """Image of a point or translate under ``T``.

    Coordinate ``i`` of the image is the formal combination
    ``sum_j T[i][j] * preimage[j]``, kept as the row ``T[i]``; the per-axis
    elements are never mixed because they live over different bases.
    """

    T: RationalMatrix
    preimage: PointND | TranslateND

    def __post_init__(self):
        _same_dimension(self.T, self.preimage)

    @property
    def dimension(self) -> int:
        return self.T.dimension

    def image_rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self.T.rows

    def approx(self, bases) -> tuple[float, ...]:
        parts = self.preimage.coords if isinstance(self.preimage, PointND) else self.preimage.offsets
        vals = [to_float(g, b) for g, b in zip(parts, bases)]
        return tuple(float(x) for x in self.T.apply([Fraction(v) for v in vals]))


@dataclass(frozen=True)
class ParallelepipedSpec:
    """Box ``axes[0] x ... x axes[n-1]`` mapped by ``matrix``; axis entries are
    dicts with ``interval`` text, ``epsilon`` and ``steps``."""

    axes: tuple[dict, ...]
    matrix: RationalMatrix

    @property
    def dimension(self) -> int:
        return len(self.axes)

    def to_dict(self) -> dict:
        return {"dimension": self.dimension, "axes": [dict(a) for a in self.axes],
                "matrix": self.matrix.to_json()}

    @classmethod
    def from_dict(cls, data: dict, default_epsilon: str = "1/20", default_steps: int = 25) -> ParallelepipedSpec:
        axes = []
        for a in data["axes"]:
            if isinstance(a, str):
                a = {"interval": a}
            axes.append({"interval": a["interval"],
                         "epsilon": str(a.get("epsilon", default_epsilon)),
                         "steps": int(a.get("steps", default_steps))})
        n = int(data.get("dimension", len(axes)))
        matrix = data.get("matrix")
        T = RationalMatrix.from_json(matrix) if matrix is not None else RationalMatrix.identity(n)
        spec = cls(tuple(axes), T)
        if n != len(axes) or T.dimension != n:
            raise DimensionMismatch(f"dimension {n} with {len(axes)} axes and a {T.dimension}x{T.dimension} matrix")
        return spec


def apply_linear_map(T: RationalMatrix, obj):
    if isinstance(obj, (PointND, TranslateND)):
        return Mapped(T, obj)
    if isinstance(obj, Mapped):
        _same_dimension(T, obj)
        return Mapped(T @ obj.T, obj.preimage)
    if isinstance(obj, ParallelepipedSpec):
        _same_dimension(T, obj)
        return ParallelepipedSpec(obj.axes, T @ obj.matrix)
    raise TypeError(f"cannot map {type(obj).__name__}")


def pullback(m: Mapped):
    """Apply ``T^-1`` to the formal image and read the preimage back off."""
    back = m.T.inverse() @ RationalMatrix(m.image_rows())
    parts = m.preimage.coords if isinstance(m.preimage, PointND) else m.preimage.offsets
    out = []
    for row in back.rows:
        nz = [(j, c) for j, c in enumerate(row) if c]
        if len(nz) != 1 or nz[0][1] != 1:
            raise InvariantViolation("pullback did not return a coordinate selection")
        out.append(parts[nz[0][0]])
    return PointND(tuple(out)) if isinstance(m.preimage, PointND) else TranslateND(tuple(out))


def _common_map(*ms: Mapped) -> RationalMatrix:
    Ts = {m.T for m in ms}
    if len(Ts) != 1:
        raise UsageError("mapped objects come from different linear maps")
    return Ts.pop()


def mapped_translates_disjoint(u: Mapped, v: Mapped) -> bool:
    _common_map(u, v)
    return product_translates_disjoint(pullback(u), pullback(v))


def mapped_contains(t: Mapped, p: Mapped) -> bool:
    _common_map(t, p)
    return pullback(t).contains(pullback(p))


def verify_mapped(translates: Sequence[Mapped], points: Sequence[Mapped], n_basis: int) -> ProductReport:
    if translates or points:
        _common_map(*translates, *points)
    return _check_points([pullback(t) for t in translates], [pullback(p) for p in points], n_basis)


def decompose_box(spec: ParallelepipedSpec) -> list[Decomposition]:
    out = []
    for a in spec.axes:
        eps = parse_rational(a["epsilon"])
        out.append(decompose(parse_interval(a["interval"]), eps, int(a["steps"]), new_basis(eps)))
    return out
