"""Exact algebra of the group ``G`` generated by ``B``.

An element of ``G`` is a sparse integer vector over basis indices.  Because
``B`` is Q-independent, equality of values is equality of vectors, which makes
the translate tests below purely symbolic.  Only interval membership needs
numerics, and that goes through :func:`~steinhaus.kernel.cmp_exact`.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import HeightCapExceeded, ParseError, UsageError
from .kernel import Ordering, cmp_exact, format_rational, parse_rational, value_enclosure

DEFAULT_HEIGHT_CAP = 10**7
PLAIN_SCAN_LIMIT = 20000


class GroupElement(Mapping):
    """Immutable sparse vector ``{index: nonzero int}``; ``e_n`` denotes ``b_n``."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        items = {}
        for n, m in (coeffs or {}).items():
            n, m = int(n), int(m)
            if n < 0:
                raise ValueError(f"negative basis index {n}")
            if m:
                items[n] = m
        self._c = dict(sorted(items.items()))
        self._hash = None

    @classmethod
    def unit(cls, n: int) -> GroupElement:
        return cls({n: 1})

    @classmethod
    def zero(cls) -> GroupElement:
        return cls()

    def __getitem__(self, n):
        return self._c[n]

    def __iter__(self):
        return iter(self._c)

    def __len__(self):
        return len(self._c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._c.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, GroupElement):
            return self._c == other._c
        return NotImplemented

    @property
    def coeffs(self) -> dict[int, int]:
        return self._c

    def coeff(self, n: int) -> int:
        return self._c.get(n, 0)

    def __add__(self, other: GroupElement) -> GroupElement:
        out = dict(self._c)
        for n, m in other.items():
            out[n] = out.get(n, 0) + m
        return GroupElement(out)

    def __neg__(self) -> GroupElement:
        return GroupElement({n: -m for n, m in self._c.items()})

    def __sub__(self, other: GroupElement) -> GroupElement:
        out = dict(self._c)
        for n, m in other.items():
            out[n] = out.get(n, 0) - m
        return GroupElement(out)

    def __mul__(self, k: int) -> GroupElement:
        return GroupElement({n: k * m for n, m in self._c.items()})

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self._c)

    @property
    def max_index(self) -> int:
        return max(self._c, default=0)

    @property
    def mass(self) -> int:
        return sum(abs(m) for m in self._c.values())

    def unit_index(self) -> int | None:
        """``j`` if this element is exactly ``e_j``, else None."""
        if len(self._c) == 1:
            (n, m), = self._c.items()
            if m == 1:
                return n
        return None

    def to_dict(self) -> dict:
        return {"coeffs": {str(n): m for n, m in self._c.items()}}

    @classmethod
    def from_dict(cls, data: Mapping) -> GroupElement:
        return cls({int(n): int(m) for n, m in data["coeffs"].items()})

    def __repr__(self):
        body = ",".join(f"{n}:{m}" for n, m in self._c.items())
        return f"g{{{body}}}"


def add(g: GroupElement, h: GroupElement) -> GroupElement:
    return g + h


def neg(g: GroupElement) -> GroupElement:
    return -g


def sub(g: GroupElement, h: GroupElement) -> GroupElement:
    return g - h


@dataclass(frozen=True)
class ExactPoint:
    """``group_part + offset``: an element of G shifted by a rational."""

    group_part: GroupElement = field(default_factory=GroupElement)
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset))
        if not isinstance(self.group_part, GroupElement):
            object.__setattr__(self, "group_part", GroupElement(self.group_part))

    @classmethod
    def rational(cls, r) -> ExactPoint:
        return cls(GroupElement(), parse_rational(r))

    @classmethod
    def of(cls, x) -> ExactPoint:
        if isinstance(x, ExactPoint):
            return x
        if isinstance(x, GroupElement):
            return cls(x)
        if isinstance(x, (int, Fraction, str)):
            return cls.rational(x)
        raise TypeError(f"cannot make an exact point from {x!r}")

    @property
    def coeffs(self) -> dict[int, int]:
        return self.group_part.coeffs

    def canonical(self, basis) -> ExactPoint:
        """Fold the offset into index 0 when it is an integer multiple of ``q_0``."""
        if self.offset:
            m = self.offset / basis.q[0]
            if m.denominator == 1:
                return ExactPoint(self.group_part + GroupElement({0: int(m)}), Fraction(0))
        return self

    def as_group_element(self, basis) -> GroupElement | None:
        c = self.canonical(basis)
        return c.group_part if c.offset == 0 else None

    def __add__(self, other) -> ExactPoint:
        other = ExactPoint.of(other) if not isinstance(other, Fraction) else ExactPoint(GroupElement(), other)
        return ExactPoint(self.group_part + other.group_part, self.offset + other.offset)

    def __sub__(self, other) -> ExactPoint:
        other = ExactPoint.of(other) if not isinstance(other, Fraction) else ExactPoint(GroupElement(), other)
        return ExactPoint(self.group_part - other.group_part, self.offset - other.offset)

    def to_dict(self) -> dict:
        d = self.group_part.to_dict()
        d["offset"] = format_rational(self.offset)
        return d

    @classmethod
    def from_dict(cls, data: Mapping) -> ExactPoint:
        return cls(GroupElement.from_dict(data), parse_rational(data.get("offset", "0")))

    def to_text(self) -> str:
        if not self.group_part:
            return str(self.offset)
        body = ",".join(f"{n}:{m}" for n, m in self.group_part.items())
        text = f"g:{{{body}}}"
        if self.offset:
            text += f"{'+' if self.offset > 0 else '-'}{abs(self.offset)}"
        return text


@dataclass(frozen=True)
class RealInterval:
    lo: ExactPoint
    hi: ExactPoint
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", ExactPoint.of(self.lo))
        object.__setattr__(self, "hi", ExactPoint.of(self.hi))
        # Endpoints with a group part are ordered by validate(), which needs a basis.
        if not self.lo.group_part and not self.hi.group_part and self.lo.offset >= self.hi.offset:
            raise UsageError(f"empty interval: {self.lo.offset} >= {self.hi.offset}")

    def validate(self, basis) -> RealInterval:
        if cmp_exact(self.lo, self.hi, basis) is not Ordering.LESS:
            raise UsageError("interval endpoints are not increasing")
        return self

    def interior(self) -> RealInterval:
        return RealInterval(self.lo, self.hi, False, False)

    @property
    def length(self) -> ExactPoint:
        return self.hi - self.lo

    def to_text(self) -> str:
        return (("[" if self.lo_closed else "(") + self.lo.to_text() + ","
                + self.hi.to_text() + ("]" if self.hi_closed else ")"))

    def to_dict(self) -> dict:
        return {
            "text": self.to_text(),
            "lo": self.lo.to_dict(),
            "hi": self.hi.to_dict(),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> RealInterval:
        return cls(ExactPoint.from_dict(data["lo"]), ExactPoint.from_dict(data["hi"]),
                   bool(data["lo_closed"]), bool(data["hi_closed"]))


@dataclass(frozen=True)
class Translate:
    """The set ``offset + B``."""

    offset: GroupElement

    def __post_init__(self):
        if not isinstance(self.offset, GroupElement):
            object.__setattr__(self, "offset", GroupElement(self.offset))

    def element(self, n: int) -> GroupElement:
        return self.offset + GroupElement.unit(n)

    def to_dict(self) -> dict:
        return self.offset.to_dict()

    @classmethod
    def from_dict(cls, data: Mapping) -> Translate:
        return cls(GroupElement.from_dict(data))


# --- symbolic translate tests -----------------------------------------------

def translate_contains(t: Translate, x: GroupElement) -> bool:
    return (x - t.offset).unit_index() is not None


def translates_disjoint(t: Translate, u: Translate) -> bool:
    """``t`` and ``u`` meet iff their offsets differ by 0 or by ``e_q - e_p``."""
    d = t.offset - u.offset
    if not d:
        return False
    if len(d) == 2 and sorted(d.values()) == [-1, 1]:
        return False
    return True


def point_in_interval(x, J: RealInterval, basis) -> bool:
    lo = cmp_exact(x, J.lo, basis)
    if lo is Ordering.LESS or (lo is Ordering.EQUAL and not J.lo_closed):
        return False
    hi = cmp_exact(x, J.hi, basis)
    return hi is Ordering.LESS or (hi is Ordering.EQUAL and J.hi_closed)


def translate_in_interval(t: Translate, J: RealInterval, basis) -> bool:
    """``offset + B`` lies in J; B sits between its members ``b_0`` and ``b_1``."""
    return (point_in_interval(t.element(0), J, basis)
            and point_in_interval(t.element(1), J, basis))


def rational_in_G(r, basis) -> GroupElement | None:
    m = parse_rational(r) / basis.q[0]
    if m.denominator != 1:
        return None
    return GroupElement({0: int(m)})


# --- denseness search --------------------------------------------------------

def _two_gen_key(n0: int, n1: int) -> tuple[int, int, int]:
    return abs(n0) + abs(n1), -n0, -n1


def _float_bounds(J: RealInterval, basis) -> tuple[float, float]:
    lo = value_enclosure(J.lo, basis, 64).midpoint
    hi = value_enclosure(J.hi, basis, 64).midpoint
    return float(lo), float(hi)


def _plain_scan(J: RealInterval, basis, max_height: int) -> Iterator[GroupElement]:
    """Every ``n0 e0 + n1 e1`` in J with height <= max_height, in order.

    For a fixed height and sign pattern the value is affine in ``|n1|``, so the
    candidates per height come from a float prefilter; membership itself is
    decided exactly.
    """
    b0 = float(basis.q[0])
    b1 = float(value_enclosure({1: 1}, basis, 64).midpoint)
    lo_f, hi_f = _float_bounds(J, basis)
    for h in range(max_height + 1):
        cands: set[tuple[int, int]] = set()
        if h == 0:
            cands.add((0, 0))
        else:
            for s0 in (1, -1):
                for s1 in (1, -1):
                    base = s0 * h * b0
                    slope = s1 * b1 - s0 * b0
                    ta = (lo_f - base) / slope
                    tb = (hi_f - base) / slope
                    if ta > tb:
                        ta, tb = tb, ta
                    pad = 1 + 1e-9 * h
                    first = max(0, math.ceil(ta - pad))
                    last = min(h, math.floor(tb + pad))
                    for t in range(first, last + 1):
                        cands.add((s0 * (h - t), s1 * t))
        for n0, n1 in sorted(cands, key=lambda c: _two_gen_key(*c)):
            g = GroupElement({0: n0, 1: n1})
            if point_in_interval(g, J, basis):
                yield g


def _certified_cf(lo: Fraction, hi: Fraction) -> list[int]:
    """Continued-fraction terms shared by both ends of ``[lo, hi]``."""
    terms = []
    while True:
        a, b = math.floor(lo), math.floor(hi)
        if a != b:
            return terms
        terms.append(a)
        lo, hi = lo - a, hi - a
        if lo == 0 or hi == 0:
            return terms
        lo, hi = 1 / hi, 1 / lo


def _convergents(terms: list[int]) -> Iterator[tuple[int, int]]:
    p0, q0, p1, q1 = 1, 0, terms[0], 1
    yield p1, q1
    for a in terms[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1


def _cf_scan(J: RealInterval, basis, height_cap: int) -> Iterator[GroupElement]:
    """Elements of J built from convergents ``p/q`` of ``b_1 / |b_0|``.

    Each convergent gives a short vector ``p e_0 + q e_1`` with a tiny value.
    Starting from the multiple of ``b_0`` nearest the centre of J, the residual
    is reduced greedily with successively shorter vectors until it is well
    inside J; further elements are small moves along the later vectors.
    Convergents are used only when both ends of the ratio enclosure agree.
    """
    b0 = basis.q[0]
    width = value_enclosure(J.length, basis, 64).lo
    bits = 128
    while bits <= 1 << 14:
        b1 = value_enclosure({1: 1}, basis, bits)
        steps = []
        for p, q in _convergents(_certified_cf(b1.lo / -b0, b1.hi / -b0)):
            enc = value_enclosure({0: p, 1: q}, basis, bits)
            if enc.lo <= 0 <= enc.hi:
                break
            steps.append((p, q, enc.midpoint))
        if steps and abs(steps[-1][2]) < width / 4:
            break
        bits *= 2
    else:
        return
    centre = value_enclosure(J.lo, basis, bits).midpoint + width / 2
    n0 = round(centre / b0)
    n1 = 0
    residual = centre - n0 * b0
    tail = []
    for p, q, s in steps:
        if tail:
            tail.append((p, q))
            continue
        m = round(residual / s)
        n0, n1 = n0 + m * p, n1 + m * q
        residual -= m * s
        if abs(s) < width / 4:
            tail.append((p, q))
    g = GroupElement({0: n0, 1: n1})
    moves = [GroupElement()] + [GroupElement({0: j * p, 1: j * q})
                                for p, q in tail for j in (1, -1, 2, -2)]
    for mv in moves:
        h = g + mv
        if _height(h) > height_cap:
            continue
        if point_in_interval(h, J, basis):
            yield h


def _height(g: GroupElement) -> int:
    return abs(g.coeff(0)) + abs(g.coeff(1))


def iter_group_elements_in(J: RealInterval, basis, height_cap: int = DEFAULT_HEIGHT_CAP) -> Iterator[GroupElement]:
    """Elements of ``J`` of the form ``n0 e0 + n1 e1``, deterministic order.

    Exhaustive height order up to ``PLAIN_SCAN_LIMIT``; beyond that the
    continued-fraction walk takes over and the order is the walk's order.
    """
    basis.ensure(1)
    limit = min(height_cap, PLAIN_SCAN_LIMIT)
    yield from _plain_scan(J, basis, limit)
    if height_cap <= limit:
        return
    for g in _cf_scan(J, basis, height_cap):
        if limit < _height(g) <= height_cap:
            yield g


def find_group_element_in(J: RealInterval, basis, height_cap: int = DEFAULT_HEIGHT_CAP) -> GroupElement:
    for g in iter_group_elements_in(J, basis, height_cap):
        return g
    raise HeightCapExceeded(f"no element of G found in {J.to_text()} within height {height_cap}")


# --- text form of intervals ---------------------------------------------------

def _parse_endpoint(text: str, pos: int) -> tuple[ExactPoint, int]:
    """Parse a rational or ``g:{n:m,...}`` (optionally ``+r``) starting at ``pos``."""
    i = pos
    while i < len(text) and text[i].isspace():
        i += 1
    if text.startswith("g:", i):
        i += 2
        if i >= len(text) or text[i] != "{":
            raise ParseError("expected '{' after 'g:'", i)
        close = text.find("}", i)
        if close < 0:
            raise ParseError("unterminated group element", i)
        coeffs = {}
        body = text[i + 1:close].strip()
        if body:
            for part in body.split(","):
                try:
                    n, m = part.split(":")
                    coeffs[int(n)] = coeffs.get(int(n), 0) + int(m)
                except ValueError:
                    raise ParseError(f"bad coefficient {part.strip()!r}", i + 1) from None
        i = close + 1
        offset = Fraction(0)
        j = i
        while j < len(text) and text[j] not in ",)]":
            j += 1
        tail = text[i:j].strip()
        if tail:
            try:
                offset = parse_rational(tail)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad offset {tail!r}", i) from None
        return ExactPoint(GroupElement(coeffs), offset), j
    j = i
    while j < len(text) and text[j] not in ",)]":
        j += 1
    token = text[i:j].strip()
    if not token:
        raise ParseError("missing endpoint", i)
    try:
        return ExactPoint.rational(token), j
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {token!r}", i) from None


def parse_interval(text: str) -> RealInterval:
    """Parse ``[a,b)``-style literals; endpoints are rationals or ``g:{n:m,...}``."""
    s = text.strip()
    if not s or s[0] not in "[(":
        raise ParseError("interval must start with '[' or '('", 0)
    lo, i = _parse_endpoint(s, 1)
    if i >= len(s) or s[i] != ",":
        raise ParseError("expected ','", i)
    hi, j = _parse_endpoint(s, i + 1)
    if j >= len(s) or s[j] not in ")]":
        raise ParseError("interval must end with ')' or ']'", j)
    if j != len(s) - 1:
        raise ParseError("trailing characters", j + 1)
    return RealInterval(lo, hi, s[0] == "[", s[j] == "]")
