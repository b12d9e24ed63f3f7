"""Exact arithmetic kernel.

Rationals are :class:`fractions.Fraction`.  Real numbers of the form
``r + sum(m_n * q_n * theta**n)`` are handled symbolically: a sparse integer
coefficient map plus a rational offset.  Numeric information only enters
through dyadic enclosures, and the only comparison offered is
:func:`cmp_exact`, which never guesses.

Internally an enclosure at ``w`` bits is a pair of integers ``(lo, hi)``
with ``lo <= value * 2**w <= hi``.
"""

from __future__ import annotations

import enum
import os
from collections.abc import Mapping
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any, Iterator

from .errors import PrecisionExhausted, UnknownBasisIndex

DEFAULT_PRECISION_CAP = 65536
PRECISION_CAP_ENV = "STEINHAUS_PRECISION_CAP"
START_PRECISION = 64

_precision_cap: ContextVar[int | None] = ContextVar("_precision_cap", default=None)


def current_precision_cap() -> int:
    cap = _precision_cap.get()
    if cap is not None:
        return cap
    env = os.environ.get(PRECISION_CAP_ENV)
    return int(env) if env else DEFAULT_PRECISION_CAP


@contextmanager
def precision_cap(bits: int) -> Iterator[None]:
    """Temporarily change the precision cap used by :func:`cmp_exact`."""
    if bits < START_PRECISION:
        raise ValueError(f"precision cap must be at least {START_PRECISION} bits")
    token = _precision_cap.set(bits)
    try:
        yield
    finally:
        _precision_cap.reset(token)


# --- rationals ---------------------------------------------------------------

def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` (or an integer / exact decimal literal) into a Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(text.strip().replace("−", "-"))


def format_rational(r: Fraction | int) -> str:
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


def _floor_scaled(r: Fraction, w: int) -> int:
    return (r.numerator << w) // r.denominator


def _ceil_scaled(r: Fraction, w: int) -> int:
    return -((-r.numerator << w) // r.denominator)


# --- enclosures --------------------------------------------------------------

class ThetaDescriptor(enum.Enum):
    """The transcendental number whose powers seed the basis."""

    E = "e"


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class RealEnclosure:
    lo: Fraction
    hi: Fraction
    precision_bits: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("enclosure with lo > hi")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def within(self, other: RealEnclosure) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def width_ok(self) -> bool:
        bound = Fraction(2) ** (1 - self.precision_bits) * max(Fraction(1), abs(self.lo))
        return self.width <= bound

    @classmethod
    def point(cls, x, precision_bits: int = 1) -> RealEnclosure:
        x = Fraction(x)
        return cls(x, x, max(1, precision_bits))


# Largest enclosure of e computed so far, as (bits, lo, hi).
_E_CACHE: tuple[int, int, int] = (0, 2, 3)
# n -> (bits, lo, hi) for theta**n.
_POWER_CACHE: dict[int, tuple[int, int, int]] = {}


def _round_bits(w: int) -> int:
    return (w + 63) // 64 * 64


def _shift_bracket(lo: int, hi: int, d: int) -> tuple[int, int]:
    return lo >> d, -((-hi) >> d)


def _e_scaled(w: int) -> tuple[int, int]:
    """Bracket of ``e * 2**w`` from partial sums of 1/k!."""
    global _E_CACHE
    cached_w, lo, hi = _E_CACHE
    if w <= cached_w:
        return _shift_bracket(lo, hi, cached_w - w)
    w_new = max(_round_bits(w), 2 * cached_w)
    # t_k = floor(t_{k-1} / k) underestimates 2**w / k! by less than 2.
    t = 1 << w_new
    s = 0
    k = 0
    while t:
        s += t
        k += 1
        t //= k
    # Truncation error < 2 per summed term; tail after k terms < 2/k! < 3 units.
    lo, hi = s, s + 2 * k + 3
    _E_CACHE = (w_new, lo, hi)
    return _shift_bracket(lo, hi, w_new - w)


def _power_scaled(n: int, w: int) -> tuple[int, int]:
    """Bracket of ``e**n * 2**w`` with absolute width of a few units."""
    if n == 0:
        return 1 << w, 1 << w
    cached = _POWER_CACHE.get(n)
    if cached is not None and cached[0] >= w:
        return _shift_bracket(cached[1], cached[2], cached[0] - w)
    w_new = _round_bits(w)
    # Relative error of e at v bits grows by a factor ~ n * e**(n-1) in the power.
    v = w_new + n.bit_length() + (1443 * n) // 1000 + 32
    e_lo, e_hi = _e_scaled(v)
    shift = v * n - w_new
    lo = (e_lo ** n) >> shift
    hi = -((-(e_hi ** n)) >> shift)
    _POWER_CACHE[n] = (w_new, lo, hi)
    return _shift_bracket(lo, hi, w_new - w)


def _floor_bracket(scaled, p: int) -> int:
    """Exact ``floor(value * 2**p)`` from a bracket function, for irrational values."""
    cap = current_precision_cap()
    guard = 16
    while True:
        lo, hi = scaled(p + guard)
        a, b = lo >> guard, hi >> guard
        if a == b:
            return a
        guard *= 2
        if guard > cap:
            raise PrecisionExhausted(f"could not bracket value at {p} bits within cap {cap}")


def _check_theta(theta: ThetaDescriptor) -> None:
    if ThetaDescriptor(theta) is not ThetaDescriptor.E:
        raise NotImplementedError(f"unsupported theta {theta!r}")


def theta_enclosure(theta: ThetaDescriptor, precision_bits: int) -> RealEnclosure:
    _check_theta(theta)
    if precision_bits < 1:
        raise ValueError("precision_bits must be positive")
    f = _floor_bracket(_e_scaled, precision_bits)
    scale = 1 << precision_bits
    return RealEnclosure(Fraction(f, scale), Fraction(f + 1, scale), precision_bits)


def power_enclosure(theta: ThetaDescriptor, n: int, precision_bits: int) -> RealEnclosure:
    _check_theta(theta)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return RealEnclosure.point(1, precision_bits)
    if precision_bits < 1:
        raise ValueError("precision_bits must be positive")
    f = _floor_bracket(lambda w: _power_scaled(n, w), precision_bits)
    scale = 1 << precision_bits
    return RealEnclosure(Fraction(f, scale), Fraction(f + 1, scale), precision_bits)


# --- symbolic values ---------------------------------------------------------

def as_symbolic(x: Any) -> tuple[dict[int, int], Fraction]:
    """Coerce a value into ``(coefficients, rational offset)``.

    Accepts rationals, plain index->int mappings, and any object exposing a
    ``coeffs`` mapping and optionally an ``offset`` (group elements and exact
    points).
    """
    if isinstance(x, (int, Fraction)):
        return {}, Fraction(x)
    if isinstance(x, Mapping):
        return {int(n): int(m) for n, m in x.items() if m}, Fraction(0)
    if isinstance(x, tuple) and len(x) == 2:
        coeffs, _ = as_symbolic(x[0])
        return coeffs, Fraction(x[1])
    coeffs = getattr(x, "coeffs", None)
    if coeffs is None:
        raise TypeError(f"not a symbolic value: {x!r}")
    return {int(n): int(m) for n, m in coeffs.items() if m}, Fraction(getattr(x, "offset", 0))


def _require_committed(coeffs: Mapping[int, int], basis) -> None:
    committed = len(basis.q)
    for n in coeffs:
        if n < 0 or n >= committed:
            raise UnknownBasisIndex(f"basis index {n} has no committed rational (have {committed})")


def _eval_scaled(coeffs: Mapping[int, int], q, w: int) -> tuple[int, int]:
    lo = hi = 0
    for n, m in coeffs.items():
        c = m * q[n]
        if n == 0:
            lo += _floor_scaled(c, w)
            hi += _ceil_scaled(c, w)
            continue
        a, b = c.numerator, c.denominator
        mag = a.bit_length() - b.bit_length() + 1
        w2 = _round_bits(max(0, w + mag + 3))
        p_lo, p_hi = _power_scaled(n, w2)
        num_lo, num_hi = (a * p_lo, a * p_hi) if a > 0 else (a * p_hi, a * p_lo)
        s = w - w2
        if s >= 0:
            num_lo <<= s
            num_hi <<= s
        else:
            b <<= -s
        lo += num_lo // b
        hi += -((-num_hi) // b)
    return lo, hi


def eval_enclosure(coeffs: Mapping[int, int], basis, precision_bits: int) -> RealEnclosure:
    """Enclosure of ``sum(m_n * q_n * theta**n)``; exact when supported on index 0."""
    coeffs = {int(n): int(m) for n, m in coeffs.items() if m}
    _require_committed(coeffs, basis)
    if not coeffs:
        return RealEnclosure.point(0, precision_bits)
    if set(coeffs) == {0}:
        return RealEnclosure.point(coeffs[0] * basis.q[0], precision_bits)
    f = _floor_bracket(lambda w: _eval_scaled(coeffs, basis.q, w), precision_bits)
    scale = 1 << precision_bits
    return RealEnclosure(Fraction(f, scale), Fraction(f + 1, scale), precision_bits)


def value_enclosure(x: Any, basis, precision_bits: int) -> RealEnclosure:
    """Enclosure of a symbolic value including its rational offset."""
    coeffs, offset = as_symbolic(x)
    enc = eval_enclosure(coeffs, basis, precision_bits)
    if enc.lo == enc.hi:
        return RealEnclosure.point(enc.lo + offset, precision_bits)
    scale = 1 << precision_bits
    lo = enc.lo + Fraction(_floor_scaled(offset, precision_bits), scale)
    hi = enc.hi + Fraction(_ceil_scaled(offset, precision_bits), scale)
    return RealEnclosure(lo, hi, precision_bits)


def _sign(r: Fraction | int) -> Ordering:
    return Ordering.GREATER if r > 0 else Ordering.LESS if r < 0 else Ordering.EQUAL


def cmp_exact(x: Any, y: Any, basis) -> Ordering:
    """Exact three-way comparison of two symbolic values over ``basis``.

    Symbolic equality is the only equality (the basis is Q-independent), so a
    nonzero difference is resolved by doubling the enclosure precision until
    it excludes zero.
    """
    cx, rx = as_symbolic(x)
    cy, ry = as_symbolic(y)
    d = dict(cx)
    for n, m in cy.items():
        v = d.get(n, 0) - m
        if v:
            d[n] = v
        else:
            d.pop(n, None)
    r = rx - ry
    if not d:
        return _sign(r)
    _require_committed(d, basis)
    if set(d) == {0}:
        return _sign(d[0] * basis.q[0] + r)
    cap = current_precision_cap()
    p = START_PRECISION
    while p <= cap:
        lo, hi = _eval_scaled(d, basis.q, p)
        lo += _floor_scaled(r, p)
        hi += _ceil_scaled(r, p)
        if lo > 0:
            return Ordering.GREATER
        if hi < 0:
            return Ordering.LESS
        p *= 2
    raise PrecisionExhausted(f"sign of {d} + {r} unresolved at {cap} bits")


def to_decimal_string(x: Any, basis, digits: int = 50) -> str:
    """Decimal approximation of a symbolic value, correct to about ``digits`` digits."""
    bits = int(digits * 3.33) + 16
    mid = value_enclosure(x, basis, bits).midpoint
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(mid.numerator) / Decimal(mid.denominator))


def to_float(x: Any, basis) -> float:
    return float(value_enclosure(x, basis, 64).midpoint)
