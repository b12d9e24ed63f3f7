"""The Q-independent set ``B = {b_0, b_1, ...}`` with ``b_n = q_n * theta**n``.

``b_0`` and ``b_1`` are the two accumulation points; even-indexed elements
converge to ``b_0`` from above and odd-indexed ones to ``b_1`` from below.
The rationals ``q_n`` are committed lazily and never change once committed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidEpsilon, InvariantViolation
from .kernel import (
    Ordering,
    ThetaDescriptor,
    cmp_exact,
    format_rational,
    parse_rational,
    power_enclosure,
    value_enclosure,
)

_WORK_BITS = 128


@dataclass
class BasisSpec:
    """Frozen construction data plus the append-only list of committed ``q_n``.

    Extension mutates ``q`` and must be serialized by the caller; reading an
    already committed prefix is safe from any thread.
    """

    epsilon: Fraction
    eps_prime: Fraction
    theta: ThetaDescriptor = ThetaDescriptor.E
    q: list[Fraction] = field(default_factory=list)

    @property
    def beta0(self) -> Fraction:
        return -2 * self.epsilon

    @property
    def beta1(self) -> Fraction:
        return 2 * self.epsilon

    @property
    def committed(self) -> int:
        return len(self.q)

    def ensure(self, index: int) -> BasisSpec:
        return extend_basis(self, index)

    def window(self, m: int) -> tuple[tuple[dict[int, int], Fraction], Fraction]:
        """Open window ``(lower, lower + width)`` that ``b_m`` must land in (m >= 2)."""
        n = m // 2
        width = self.eps_prime / n
        if m % 2 == 0:
            return ({0: 1}, Fraction(0)), width
        return ({1: 1}, -width), width

    def to_dict(self) -> dict:
        return {
            "epsilon": format_rational(self.epsilon),
            "theta": self.theta.value,
            "eps_prime": format_rational(self.eps_prime),
            "q": [format_rational(x) for x in self.q],
        }

    @classmethod
    def from_dict(cls, data: dict) -> BasisSpec:
        return cls(
            epsilon=parse_rational(data["epsilon"]),
            eps_prime=parse_rational(data["eps_prime"]),
            theta=ThetaDescriptor(data.get("theta", "e")),
            q=[parse_rational(x) for x in data["q"]],
        )


class _Trial:
    """Committed prefix plus one tentative rational, for window checks."""

    def __init__(self, basis: BasisSpec, q: Fraction):
        self.q = basis.q + [q]
        self.theta = basis.theta


def _choose_q(basis: BasisSpec, m: int, lower, width: Fraction) -> Fraction:
    """Dyadic rational ``q`` with ``q * theta**m`` in the middle half of the window.

    The target is the window midpoint; ``q`` is the midpoint ratio rounded to
    ``k`` binary digits, with ``k`` increased until the exact check succeeds.
    """
    target = value_enclosure(lower, basis, _WORK_BITS).midpoint + width / 2
    power = power_enclosure(basis.theta, m, _WORK_BITS).midpoint
    ratio = target / power
    # smallest k with 2**-k * theta**m <= width / 2
    k = max(0, (2 * power / width).__ceil__().bit_length())
    lo_coeffs, lo_off = lower
    inner_lo = (lo_coeffs, lo_off + width / 4)
    inner_hi = (lo_coeffs, lo_off + 3 * width / 4)
    for _ in range(256):
        q = Fraction(round(ratio * (1 << k)), 1 << k)
        if q:
            trial = _Trial(basis, q)
            if (cmp_exact({m: 1}, inner_lo, trial) is Ordering.GREATER
                    and cmp_exact({m: 1}, inner_hi, trial) is Ordering.LESS):
                return q
        k += 1
    raise InvariantViolation(f"could not place b_{m} inside its window")


def new_basis(epsilon, theta: ThetaDescriptor = ThetaDescriptor.E) -> BasisSpec:
    """Start a basis for ``epsilon``: commits ``q_0``, ``q_1`` and ``eps_prime``."""
    eps = parse_rational(epsilon)
    if eps <= 0:
        raise InvalidEpsilon(f"epsilon must be positive, got {eps}")
    q0 = -3 * eps / 2
    basis = BasisSpec(epsilon=eps, eps_prime=Fraction(0), theta=ThetaDescriptor(theta), q=[q0])
    # b_1 targets the midpoint of (beta1 - eps, beta1) = (eps, 2 eps)
    basis.q.append(_choose_q(basis, 1, ({}, eps), eps))

    slack0 = basis.beta0 + eps - q0
    slack1 = value_enclosure(({1: 1}, -(basis.beta1 - eps)), basis, 64).lo
    if slack1 <= 0:
        raise InvariantViolation("b_1 is not above beta1 - eps")
    basis.eps_prime = min(slack0, slack1) / 2

    ep = basis.eps_prime
    b1 = {1: 1}
    ok = (
        q0 < q0 + ep < basis.beta0 + eps
        and cmp_exact(basis.beta1 - eps, (b1, -ep), basis) is Ordering.LESS
        and cmp_exact((b1, -ep), b1, basis) is Ordering.LESS
    )
    if not ok:
        raise InvariantViolation("eps_prime does not fit inside the slack")
    return basis


def extend_basis(basis: BasisSpec, up_to_index: int) -> BasisSpec:
    """Commit ``q_m`` for every new ``m <= up_to_index`` (midpoint-rounding rule)."""
    for m in range(basis.committed, up_to_index + 1):
        lower, width = basis.window(m)
        basis.q.append(_choose_q(basis, m, lower, width))
    return basis


@dataclass
class BasisReport:
    passed: bool
    checked: int
    failure: str | None = None
    index: int | None = None

    def __bool__(self) -> bool:
        return self.passed


def verify_basis_properties(basis: BasisSpec, n_max: int) -> BasisReport:
    """Re-check the ordering windows of every committed ``b_n`` with ``n <= n_max``.

    Covers the two ordering chains, the shrinking window bound
    ``|b_m - accumulation point| < eps_prime / (m // 2)`` and the
    clustering property at ``delta = eps_prime``.
    """
    eps, ep = basis.epsilon, basis.eps_prime
    q = basis.q
    b0, b1 = {0: 1}, {1: 1}

    def lt(x, y) -> bool:
        return cmp_exact(x, y, basis) is Ordering.LESS

    def fail(msg: str, index: int) -> BasisReport:
        return BasisReport(False, index, msg, index)

    if not q:
        return fail("no committed rationals", 0)
    if any(x == 0 for x in q):
        return fail("zero rational", q.index(Fraction(0)))
    if not (basis.beta0 < q[0] < basis.beta0 + eps):
        return fail("b_0 outside (beta0, beta0 + eps)", 0)
    if len(q) > 1:
        if not (lt(basis.beta1 - eps, b1) and lt(b1, basis.beta1)):
            return fail("b_1 outside (beta1 - eps, beta1)", 1)
        if not (ep > 0 and q[0] + ep < basis.beta0 + eps
                and lt(basis.beta1 - eps, (b1, -ep))):
            return fail("eps_prime does not fit inside the slack", 1)
    top = min(n_max, len(q) - 1)
    for m in range(2, top + 1):
        n = m // 2
        bm = {m: 1}
        if m % 2 == 0:
            if not (lt(b0, bm) and lt(bm, (b0, ep / n))):
                return fail(f"b_{m} outside (b_0, b_0 + eps'/{n})", m)
            if not lt(bm, basis.beta0 + eps):
                return fail(f"b_{m} not below beta0 + eps", m)
            if not lt(bm, (b0, ep)):
                return fail(f"b_{m} outside [b_0, b_0 + delta)", m)
        else:
            if not (lt((b1, -ep / n), bm) and lt(bm, b1)):
                return fail(f"b_{m} outside (b_1 - eps'/{n}, b_1)", m)
            if not lt(basis.beta1 - eps, bm):
                return fail(f"b_{m} not above beta1 - eps", m)
            if not lt((b1, -ep), bm):
                return fail(f"b_{m} outside (b_1 - delta, b_1]", m)
    return BasisReport(True, max(top + 1, 0))
