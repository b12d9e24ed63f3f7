import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from steinhaus.errors import HeightCapExceeded, ParseError, UsageError
from steinhaus.group import (
    ExactPoint,
    GroupElement,
    RealInterval,
    Translate,
    add,
    find_group_element_in,
    iter_group_elements_in,
    neg,
    parse_interval,
    point_in_interval,
    rational_in_G,
    sub,
    translate_contains,
    translate_in_interval,
    translates_disjoint,
)
from steinhaus.kernel import to_float

from oracles import mp_value, two_generator_scan

e = GroupElement.unit
elements = st.dictionaries(st.integers(0, 15), st.integers(-5, 5), max_size=5).map(GroupElement)


# --- algebra -------------------------------------------------------------------

def test_algebra_examples():
    g = GroupElement({0: 2, 4: -1})
    assert add(g, GroupElement.zero()) == g
    assert sub(g, g) == GroupElement.zero()
    assert add(e(3), sub(e(5), e(3))) == e(5)


@given(elements, elements, elements)
def test_group_axioms(g, h, k):
    assert add(add(g, h), k) == add(g, add(h, k))
    assert add(g, h) == add(h, g)
    assert add(g, neg(g)) == GroupElement.zero()
    assert sub(g, h) == add(g, neg(h))
    assert all(m != 0 for m in add(g, h).values())


def test_canonical_drops_zeros_and_hashes_by_value():
    a = GroupElement({0: 1, 3: 0})
    assert dict(a) == {0: 1}
    assert a == GroupElement({0: 1}) and hash(a) == hash(GroupElement({0: 1}))


@given(elements)
def test_element_json_round_trip(g):
    data = json.loads(json.dumps(g.to_dict()))
    assert set(data) == {"coeffs"}
    assert GroupElement.from_dict(data) == g


@given(elements, st.fractions(max_denominator=100))
def test_point_json_round_trip(g, r):
    p = ExactPoint(g, r)
    data = json.loads(json.dumps(p.to_dict()))
    assert "offset" in data
    assert ExactPoint.from_dict(data) == p


# --- translate tests -----------------------------------------------------------

A = GroupElement({0: -2, 3: 1})


def test_translate_contains_examples():
    t = Translate(A)
    assert translate_contains(t, A + e(7))
    assert not translate_contains(t, A)
    assert not translate_contains(t, A + e(2) + e(3))


def test_translates_disjoint_examples():
    assert not translates_disjoint(Translate(A), Translate(A))
    assert not translates_disjoint(Translate(A + e(3) - e(5)), Translate(A))
    assert translates_disjoint(Translate(A + e(3) * 2), Translate(A))


def _numeric_meet(t, u, basis, top=40, dps=60):
    """Brute force: values of t + b_p and u + b_q for p, q <= top that agree to dps digits."""
    with mpmath.workdps(dps):
        vals_t = [mp_value(t.element(p), basis.q, dps=dps) for p in range(top + 1)]
        vals_u = [mp_value(u.element(q), basis.q, dps=dps) for q in range(top + 1)]
        tol = mpmath.mpf(10) ** (-dps + 10)
        return [(p, q) for p, x in enumerate(vals_t) for q, y in enumerate(vals_u) if abs(x - y) < tol]


small_offsets = st.dictionaries(st.integers(0, 6), st.integers(-2, 2), max_size=4).map(GroupElement)


@given(small_offsets, small_offsets)
def test_symbolic_disjointness_agrees_with_numeric_search(basis20, a, b):
    t, u = Translate(a), Translate(b)
    meets = _numeric_meet(t, u, basis20)
    if meets:
        assert not translates_disjoint(t, u)
    if translates_disjoint(t, u):
        assert not meets


@given(small_offsets, st.integers(0, 40), st.integers(0, 40))
def test_constructed_intersections_found_numerically(basis20, a, p, q):
    t, u = Translate(a), Translate(a + e(p) - e(q))
    assert not translates_disjoint(t, u)
    assert (p, q) in _numeric_meet(t, u, basis20)


@given(small_offsets, st.integers(0, 30), st.integers(0, 30))
def test_containment_implies_shared_point(a, j, k):
    t = Translate(a)
    x = a + e(j)
    assert translate_contains(t, x)
    other = Translate(x - e(k))
    assert translate_contains(other, x)
    assert not translates_disjoint(t, other)


# --- intervals -----------------------------------------------------------------

def test_translate_in_interval_examples(basis20):
    b = basis20
    wide = RealInterval(b.beta0 * 10, b.beta1 * 10)
    assert translate_in_interval(Translate(GroupElement()), wide, b)
    assert not translate_in_interval(Translate(GroupElement()), parse_interval("(0,1)"), b)
    c0, c1 = GroupElement({0: 2, 1: -1}), GroupElement({0: -9, 1: 1})
    J = RealInterval(c0, c1, True, True).validate(b)
    assert translate_in_interval(Translate(c0 - e(0)), J, b)


def test_point_in_interval_examples(basis20):
    closed = parse_interval("[1/3,2/3)")
    opened = parse_interval("(1/3,2/3)")
    assert point_in_interval(Fraction(1, 3), closed, basis20)
    assert not point_in_interval(Fraction(1, 3), opened, basis20)
    assert point_in_interval(Fraction(1, 2), opened, basis20)
    assert not point_in_interval(Fraction(2, 3), closed, basis20)


def test_rational_in_G_examples(basis20):
    q0 = basis20.q[0]
    assert rational_in_G(0, basis20) == GroupElement.zero()
    assert rational_in_G(q0, basis20) == e(0)
    assert rational_in_G(q0 / 2, basis20) is None
    assert rational_in_G(-7 * q0, basis20) == GroupElement({0: -7})


def test_canonical_folds_multiples_of_q0(basis20):
    p = ExactPoint(e(3), 2 * basis20.q[0])
    assert p.canonical(basis20) == ExactPoint(GroupElement({0: 2, 3: 1}))
    assert ExactPoint(e(3), Fraction(1, 7)).as_group_element(basis20) is None


# --- denseness search ------------------------------------------------------------

def test_find_zero_in_symmetric_interval(basis20):
    eps = basis20.epsilon
    assert find_group_element_in(RealInterval(-eps, eps), basis20) == GroupElement.zero()


def test_find_b0_in_its_window(basis20):
    b0, ep = basis20.q[0], basis20.eps_prime
    assert find_group_element_in(RealInterval(b0 - ep, b0 + ep), basis20) == e(0)


def test_find_near_one_half_is_minimal_height(basis20):
    J = parse_interval("(49/100,51/100)")
    g = find_group_element_in(J, basis20)
    assert set(g) <= {0, 1}
    assert point_in_interval(g, J, basis20)
    v = mp_value(g, basis20.q)
    assert 0.49 < v < 0.51
    h = abs(g.coeff(0)) + abs(g.coeff(1))
    b0, b1 = to_float(e(0), basis20), to_float(e(1), basis20)
    hits = two_generator_scan(0.49, 0.51, b0, b1, h)
    assert hits and hits[0][0] == h


@given(st.integers(-900, 900), st.integers(1, 200), st.booleans(), st.booleans())
def test_search_respects_flags_and_is_deterministic(basis20, start, length, lc, hc):
    lo = Fraction(start, 1000)
    J = RealInterval(lo, lo + Fraction(length, 1000), lc, hc)
    g = find_group_element_in(J, basis20)
    assert point_in_interval(g, J, basis20)
    assert g == find_group_element_in(J, basis20)


def test_iter_yields_distinct_members(basis20):
    J = parse_interval("[0,1/10]")
    out = []
    for g in iter_group_elements_in(J, basis20, height_cap=60):
        out.append(g)
    assert len(out) == len(set(out)) > 5
    assert all(point_in_interval(g, J, basis20) for g in out)


def test_height_cap_exceeded(basis20):
    J = RealInterval(Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10**6))
    with pytest.raises(HeightCapExceeded):
        find_group_element_in(J, basis20, height_cap=50)


def test_tiny_interval_found_past_plain_scan(basis20):
    lo = Fraction(314159, 10**6)
    J = RealInterval(lo, lo + Fraction(1, 10**6))
    g = find_group_element_in(J, basis20)
    assert point_in_interval(g, J, basis20)


# --- text form ---------------------------------------------------------------------

def test_parse_interval_examples():
    J = parse_interval("[0,1)")
    assert J.lo == ExactPoint.rational(0) and J.hi == ExactPoint.rational(1)
    assert J.lo_closed and not J.hi_closed
    K = parse_interval("(−1/2,1/2)")
    assert not K.lo_closed and not K.hi_closed
    assert K.lo.offset == Fraction(-1, 2)


@pytest.mark.parametrize("text", ["[0,1", "0,1]", "[0;1]", "[a,1]", "[0,1]x", "[g:{0:1,1},1]", ""])
def test_parse_interval_errors(text):
    with pytest.raises(ParseError) as info:
        parse_interval(text)
    assert info.value.position >= 0


def test_parse_group_endpoints():
    J = parse_interval("[g:{0:-1},g:{0:-9,1:1}+1/2]")
    assert J.lo.group_part == GroupElement({0: -1})
    assert J.hi.group_part == GroupElement({0: -9, 1: 1}) and J.hi.offset == Fraction(1, 2)


def test_empty_rational_interval_rejected():
    with pytest.raises(UsageError):
        parse_interval("[1,0]")


endpoint = st.one_of(
    st.fractions(min_value=-5, max_value=5, max_denominator=40).map(ExactPoint.rational),
    st.builds(ExactPoint, small_offsets, st.fractions(min_value=-1, max_value=1, max_denominator=9)),
)


@given(endpoint, endpoint, st.booleans(), st.booleans())
def test_interval_text_round_trip(lo, hi, lc, hc):
    if not lo.group_part and not hi.group_part:
        if lo.offset == hi.offset:
            return
        lo, hi = sorted((lo, hi), key=lambda p: p.offset)
    J = RealInterval(lo, hi, lc, hc)
    again = parse_interval(J.to_text())
    assert again == J
    assert again.to_text() == J.to_text()
    assert RealInterval.from_dict(json.loads(json.dumps(J.to_dict()))) == J
