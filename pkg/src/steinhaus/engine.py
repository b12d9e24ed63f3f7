"""Greedy construction of ``A`` with ``A (+) B = J n G``.

The target set ``C = J n G`` is enumerated with the endpoint cases first and
then in height order.  Each step takes the first enumerated point not yet
covered and places a fresh translate ``x - b_j + B`` through it, disjoint
from everything placed so far.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .basis import BasisSpec, new_basis
from .errors import (
    CandidateBoundExceeded,
    HeightCapExceeded,
    IntervalTooShort,
    InvariantViolation,
    UsageError,
)
from .group import (
    DEFAULT_HEIGHT_CAP,
    ExactPoint,
    GroupElement,
    RealInterval,
    Translate,
    iter_group_elements_in,
    point_in_interval,
    translate_contains,
    translate_in_interval,
    translates_disjoint,
)
from .kernel import Ordering, _ceil_scaled, cmp_exact, parse_rational, to_float, value_enclosure

# Weight of the largest basis index in the enumeration height.
INDEX_WEIGHT = 8
# Hard stop for the basis scan in find_covering_translate; never reached in practice.
MAX_SCAN_INDEX = 1 << 16


def height(g: GroupElement) -> int:
    return INDEX_WEIGHT * g.max_index + g.mass


def _vectors(top: int, mass: int):
    """Integer vectors on indices ``0..top`` with L1 norm ``mass`` and nonzero ``top`` entry."""
    if top == 0:
        if mass == 0:
            yield (0,)
        else:
            yield (mass,)
            yield (-mass,)
        return

    def rest(n: int, budget: int):
        if n < 0:
            if budget == 0:
                yield ()
            return
        for m in range(-budget, budget + 1):
            for tail in rest(n - 1, budget - abs(m)):
                yield tail + (m,)

    for last in range(1, mass + 1):
        for head in rest(top - 1, mass - last):
            yield head + (last,)
            yield head + (-last,)


def _in_C(point: ExactPoint, closed: bool, basis) -> GroupElement | None:
    if not closed:
        return None
    return point.as_group_element(basis)


class CEnumeration:
    """Lazy enumeration ``x_0, x_1, ...`` of ``C = J n G``.

    Endpoints that belong to C come first (``c_0`` then ``c_1``); everything
    else follows in increasing :func:`height`, ties broken by the coefficient
    tuple in descending lexicographic order.
    """

    def __init__(self, J: RealInterval, basis: BasisSpec):
        self.J = J
        self.basis = basis
        self.emitted: list[GroupElement] = []
        self._seen: set[GroupElement] = set()
        self._height = 0
        self._floats: list[float] = []
        lo_f = to_float(J.lo, basis)
        hi_f = to_float(J.hi, basis)
        margin = 1e-9 * (1 + abs(lo_f) + abs(hi_f))
        self._window = (lo_f - margin, hi_f + margin)
        c0 = _in_C(J.lo, J.lo_closed, basis)
        c1 = _in_C(J.hi, J.hi_closed, basis)
        self.c0_in_C = c0 is not None
        self.c1_in_C = c1 is not None
        for c in (c0, c1):
            if c is not None:
                self._emit(c)

    def _emit(self, g: GroupElement) -> None:
        self.emitted.append(g)
        self._seen.add(g)

    def _float_value(self, vec: tuple[int, ...]) -> float:
        while len(self._floats) < len(vec):
            self._floats.append(to_float({len(self._floats): 1}, self.basis))
        return sum(m * self._floats[n] for n, m in enumerate(vec) if m)

    def _next_height(self) -> None:
        h = self._height
        self._height += 1
        lo, hi = self._window
        hits = []
        for top in range(h // INDEX_WEIGHT + 1):
            mass = h - INDEX_WEIGHT * top
            if top > 0 and mass == 0:
                continue
            self.basis.ensure(top)
            for vec in _vectors(top, mass):
                if lo <= self._float_value(vec) <= hi:
                    hits.append(vec)
        width = max((len(v) for v in hits), default=0)
        hits.sort(key=lambda v: tuple(-m for m in v) + (0,) * (width - len(v)))
        for vec in hits:
            g = GroupElement(dict(enumerate(vec)))
            if g not in self._seen and point_in_interval(g, self.J, self.basis):
                self._emit(g)

    def extend(self, count: int) -> CEnumeration:
        while len(self.emitted) < count:
            self._next_height()
        return self

    def __getitem__(self, i: int) -> GroupElement:
        self.extend(i + 1)
        return self.emitted[i]

    def __len__(self) -> int:
        return len(self.emitted)


def enumerate_C(J: RealInterval, basis: BasisSpec, count: int) -> CEnumeration:
    if count < 1:
        raise UsageError("count must be at least 1")
    return CEnumeration(J, basis).extend(count)


def check_length(J: RealInterval, basis: BasisSpec) -> None:
    J.validate(basis)
    if cmp_exact(J.length, 8 * basis.epsilon, basis) is not Ordering.GREATER:
        raise IntervalTooShort(
            f"interval {J.to_text()} must be longer than 8*epsilon = {8 * basis.epsilon}")


def endpoint_translates(J: RealInterval, basis: BasisSpec) -> list[Translate]:
    """Translates ``(c_0 - b_0) + B`` and ``(c_1 - b_1) + B`` for endpoints lying in C."""
    basis.ensure(1)
    out = []
    c0 = _in_C(J.lo, J.lo_closed, basis)
    c1 = _in_C(J.hi, J.hi_closed, basis)
    if c0 is not None:
        out.append(Translate(c0 - GroupElement.unit(0)))
    if c1 is not None:
        out.append(Translate(c1 - GroupElement.unit(1)))
    for t in out:
        if not translate_in_interval(t, J, basis):
            raise InvariantViolation(f"endpoint translate {t.offset} leaves {J.to_text()}")
    if len(out) == 2 and not translates_disjoint(*out):
        raise InvariantViolation("endpoint translates intersect")
    return out


def find_covering_translate(x: GroupElement, existing: list[Translate], J: RealInterval,
                            basis: BasisSpec) -> tuple[Translate, int]:
    """Translate through ``x`` inside the interior of J, disjoint from ``existing``.

    Scans ``j = 0, 1, 2, ...``; ``j`` qualifies when
    ``x - c_1 + b_1 < b_j < x - c_0 + b_0``, i.e. when ``x - b_j + B`` fits
    in the open interval.  At most two qualified ``j`` can clash with each
    existing translate, so success comes within ``2k + 1`` qualified ones.
    Returns the translate and the number of qualified candidates scanned.
    """
    interior = J.interior()
    if not point_in_interval(x, interior, basis):
        raise InvariantViolation(f"{x} is not inside the open interval {interior.to_text()}")
    lower = ExactPoint(x + GroupElement.unit(1) - J.hi.group_part, -J.hi.offset)
    upper = ExactPoint(x + GroupElement.unit(0) - J.lo.group_part, -J.lo.offset)
    bound = 2 * len(existing) + 1
    qualified = 0
    for j in range(MAX_SCAN_INDEX):
        basis.ensure(j)
        bj = {j: 1}
        if cmp_exact(lower, bj, basis) is not Ordering.LESS:
            continue
        if cmp_exact(bj, upper, basis) is not Ordering.LESS:
            continue
        qualified += 1
        t = Translate(x - GroupElement.unit(j))
        if (translate_in_interval(t, interior, basis)
                and all(translates_disjoint(t, u) for u in existing)):
            return t, qualified
        if qualified >= bound:
            raise CandidateBoundExceeded(
                f"{qualified} qualified candidates failed for x = {x} with k = {len(existing)}")
    raise InvariantViolation(f"no qualified basis index below {MAX_SCAN_INDEX} for x = {x}")


@dataclass
class Decomposition:
    J: RealInterval
    epsilon: Fraction
    basis: BasisSpec
    translates: list[Translate] = field(default_factory=list)
    # (translate index, index of the enumerated point it was placed through)
    coverage_log: list[tuple[int, int]] = field(default_factory=list)
    # (translates existing at the step, qualified candidates scanned); not serialized
    scan_log: list[tuple[int, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "interval": self.J.to_dict(),
            "epsilon": self.basis.to_dict()["epsilon"],
            "basis": self.basis.to_dict(),
            "translates": [t.to_dict() for t in self.translates],
            "coverage_log": [[j, l] for j, l in self.coverage_log],
        }

    @classmethod
    def from_dict(cls, data: dict) -> Decomposition:
        basis = BasisSpec.from_dict(data["basis"])
        return cls(
            J=RealInterval.from_dict(data["interval"]),
            epsilon=parse_rational(data["epsilon"]),
            basis=basis,
            translates=[Translate.from_dict(t) for t in data["translates"]],
            coverage_log=[(int(j), int(l)) for j, l in data["coverage_log"]],
        )

    def prefix(self, k: int) -> list[Translate]:
        return self.translates[:k]


def _covered(x: GroupElement, translates: list[Translate]) -> bool:
    return any(translate_contains(t, x) for t in translates)


def decompose(J: RealInterval, epsilon, steps: int, basis: BasisSpec | None = None) -> Decomposition:
    """Seed with the endpoint translates, then run ``steps`` greedy steps.

    When no endpoint lies in C the first point is seeded through the core
    step with nothing to avoid.  The result holds seeds + ``steps`` translates.
    """
    epsilon = parse_rational(epsilon)
    if basis is None:
        basis = new_basis(epsilon)
    elif basis.epsilon != epsilon:
        raise UsageError(f"basis built for epsilon {basis.epsilon}, not {epsilon}")
    if steps < 1:
        raise UsageError("steps must be at least 1")
    check_length(J, basis)

    enum = CEnumeration(J, basis)
    d = Decomposition(J, epsilon, basis)
    seeds = endpoint_translates(J, basis)
    if seeds:
        for i, t in enumerate(seeds):
            d.translates.append(t)
            d.coverage_log.append((i, i))
    else:
        t, scanned = find_covering_translate(enum[0], [], J, basis)
        d.translates.append(t)
        d.coverage_log.append((0, 0))
        d.scan_log.append((0, scanned))

    cursor = 0
    for _ in range(steps):
        while _covered(enum[cursor], d.translates):
            cursor += 1
        k = len(d.translates)
        t, scanned = find_covering_translate(enum[cursor], d.translates, J, basis)
        d.translates.append(t)
        d.coverage_log.append((k, cursor))
        d.scan_log.append((k, scanned))
    return d


@dataclass
class DecompositionReport:
    passed: bool
    checks: dict[str, bool]
    failure: str | None = None
    witness: object = None

    def __bool__(self) -> bool:
        return self.passed


def verify_decomposition(d: Decomposition, n_points: int, n_basis: int) -> DecompositionReport:
    """Exact re-check of a decomposition.

    disjoint: translates pairwise disjoint.
    coverage: each of the first ``n_points`` points of C lies in exactly one translate.
    unique: no two pairs ``(j, p) != (j', p')`` with ``p, p' <= n_basis`` give
    the same vector ``a_j + e_p``.
    inside: every translate lies in J.
    provenance: every logged translate contains its logged point.
    """
    checks = {}
    basis, J, ts = d.basis, d.J, d.translates

    def report(name: str, msg: str, witness) -> DecompositionReport:
        checks[name] = False
        return DecompositionReport(False, checks, msg, witness)

    for (i, t), (j, u) in itertools.combinations(enumerate(ts), 2):
        if not translates_disjoint(t, u):
            return report("disjoint", f"translates {i} and {j} intersect", (i, j))
    checks["disjoint"] = True

    enum = CEnumeration(J, basis)
    if n_points > 0:
        enum.extend(n_points)
    for l in range(n_points):
        x = enum[l]
        owners = [i for i, t in enumerate(ts) if translate_contains(t, x)]
        if len(owners) != 1:
            return report("coverage", f"x_{l} = {x} lies in {len(owners)} translates", (l, owners))
    checks["coverage"] = True

    seen: dict[GroupElement, tuple[int, int]] = {}
    for i, t in enumerate(ts):
        for p in range(n_basis + 1):
            v = t.element(p)
            if v in seen:
                return report("unique", f"a_{i} + b_{p} equals a_{seen[v][0]} + b_{seen[v][1]}",
                              (seen[v], (i, p)))
            seen[v] = (i, p)
    checks["unique"] = True

    for i, t in enumerate(ts):
        if any(n >= basis.committed for n in t.offset):
            basis.ensure(max(t.offset))
        if not translate_in_interval(t, J, basis):
            return report("inside", f"translate {i} is not contained in J", i)
    checks["inside"] = True

    for j, l in d.coverage_log:
        if not (0 <= j < len(ts)) or not translate_contains(ts[j], enum[l]):
            return report("provenance", f"translate {j} does not contain x_{l}", (j, l))
    checks["provenance"] = True
    return DecompositionReport(True, checks)


def _strictly_below_third(x: Fraction) -> Fraction:
    """A positive dyadic rational strictly below ``x / 3``."""
    bits = 64
    while True:
        m = _ceil_scaled(x / 3, bits) - 1
        if m > 0:
            return Fraction(m, 1 << bits)
        bits *= 2


def find_uncovered_point(existing: list[Translate], J: RealInterval, basis: BasisSpec,
                         height_cap: int = DEFAULT_HEIGHT_CAP) -> GroupElement:
    """A point of ``C`` outside every translate in ``existing``.

    Around each endpoint ``a + b_0`` / ``a + b_1`` a strip of width ``delta``
    (a third of the smallest endpoint gap) swallows all but finitely many
    points of its translate.  A gap of J between strips of length at least
    ``delta`` therefore meets the union in a finite set, while it holds
    infinitely many points of G; the search skips the finitely many covered ones.
    """
    for t, u in itertools.combinations(existing, 2):
        if not translates_disjoint(t, u):
            raise InvariantViolation("existing translates are not pairwise disjoint")
    check_length(J, basis)

    def outside(g: GroupElement) -> bool:
        return not _covered(g, existing)

    if not existing:
        search = J
    else:
        anchors = []
        for t in existing:
            anchors.append((t.element(0), True))
            anchors.append((t.element(1), False))
        anchors.sort(key=functools.cmp_to_key(lambda a, b: cmp_exact(a[0], b[0], basis)))
        gaps = []
        for (a, _), (b, _) in zip(anchors, anchors[1:]):
            gap = value_enclosure(b - a, basis, 64)
            if gap.lo <= 0:
                if cmp_exact(a, b, basis) is not Ordering.LESS:
                    raise InvariantViolation(f"translate endpoints {a} and {b} coincide")
                gap = value_enclosure(b - a, basis, 256)
            gaps.append(gap.lo)
        delta = _strictly_below_third(min(gaps)) if gaps else Fraction(1)

        strips = []
        for a, left in anchors:
            p = ExactPoint(a)
            strips.append((p, p + delta) if left else (p - delta, p))
        search = None
        prev_end = J.lo
        for start, end in strips + [(J.hi, None)]:
            lo = prev_end if cmp_exact(prev_end, J.lo, basis) is Ordering.GREATER else J.lo
            hi = start if cmp_exact(start, J.hi, basis) is Ordering.LESS else J.hi
            if cmp_exact(hi - lo, delta, basis) is not Ordering.LESS:
                search = RealInterval(lo, hi, False, False)
                break
            if end is not None:
                prev_end = end
        if search is None:
            raise InvariantViolation("no gap of length delta between the endpoint strips")

    for g in iter_group_elements_in(search, basis, height_cap):
        if outside(g):
            if not point_in_interval(g, J, basis):
                raise InvariantViolation(f"witness {g} is not in J")
            return g
    raise HeightCapExceeded(f"no uncovered point found within height {height_cap}")
