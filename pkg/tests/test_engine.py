import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from steinhaus.basis import new_basis
from steinhaus.engine import (
    INDEX_WEIGHT,
    CEnumeration,
    Decomposition,
    decompose,
    endpoint_translates,
    enumerate_C,
    find_covering_translate,
    find_uncovered_point,
    height,
    verify_decomposition,
)
from steinhaus.errors import CandidateBoundExceeded, IntervalTooShort, InvariantViolation
from steinhaus.group import (
    GroupElement,
    RealInterval,
    Translate,
    parse_interval,
    point_in_interval,
    translate_contains,
    translate_in_interval,
    translates_disjoint,
)

e = GroupElement.unit
HI = GroupElement({0: -7, 1: 2})  # about 0.695 for epsilon = 1/20


# --- enumeration ---------------------------------------------------------------

def test_half_open_unit_interval_starts_at_zero(basis20):
    C = enumerate_C(parse_interval("[0,1)"), basis20, 5)
    assert C[0] == GroupElement.zero()
    assert C.c0_in_C and not C.c1_in_C


def test_open_interval_is_case_four(basis20):
    J = parse_interval("(0,1)")
    C = enumerate_C(J, basis20, 3)
    assert not C.c0_in_C and not C.c1_in_C
    assert C[0] != GroupElement.zero()
    assert point_in_interval(C[0], J, basis20)
    h0 = height(C[0])
    later = enumerate_C(J, basis20, 40)
    assert all(height(g) >= h0 for g in later.emitted)


def test_group_element_endpoints_come_first(basis20):
    J = RealInterval(GroupElement(), HI, True, True).validate(basis20)
    C = enumerate_C(J, basis20, 4)
    assert C[0] == GroupElement.zero() and C[1] == HI
    only_hi = RealInterval(GroupElement(), HI, False, True).validate(basis20)
    assert enumerate_C(only_hi, basis20, 1)[0] == HI


def _brute_force_C(J, basis, max_height):
    """Every element of height <= max_height in J, from an independent enumeration."""
    out = set()
    for top in range(max_height // INDEX_WEIGHT + 1):
        budget = max_height - INDEX_WEIGHT * top
        for vec in itertools.product(range(-budget, budget + 1), repeat=top + 1):
            if sum(map(abs, vec)) > budget or (top and vec[-1] == 0):
                continue
            g = GroupElement(dict(enumerate(vec)))
            if point_in_interval(g, J, basis):
                out.add(g)
    return out


@pytest.mark.parametrize("text", ["[0,1)", "(-1/2,1/2]", "[-1,-1/2]"])
def test_enumeration_matches_brute_force_by_height(basis20, text):
    J = parse_interval(text)
    H = 18
    C = CEnumeration(J, basis20)
    while C._height <= H:
        C._next_height()
    got = [g for g in C.emitted if height(g) <= H]
    assert len(got) == len(set(got))
    assert set(got) | {g for g in C.emitted[:2] if height(g) > H} >= _brute_force_C(J, basis20, H)
    assert set(got) <= _brute_force_C(J, basis20, H) | set(C.emitted[:2])
    rest = [g for g in C.emitted if not (C.c0_in_C and g == C.emitted[0])]
    assert [height(g) for g in rest] == sorted(height(g) for g in rest)


# --- endpoint translates ---------------------------------------------------------

def test_endpoint_translates_examples(basis20):
    assert endpoint_translates(parse_interval("(0,1)"), basis20) == []
    assert endpoint_translates(parse_interval("[0,1)"), basis20) == [Translate(-e(0))]
    J = RealInterval(GroupElement(), HI, True, True).validate(basis20)
    ts = endpoint_translates(J, basis20)
    assert ts == [Translate(-e(0)), Translate(HI - e(1))]
    assert translates_disjoint(*ts)
    assert all(translate_in_interval(t, J, basis20) for t in ts)


# --- core step -----------------------------------------------------------------------

def test_covering_zero_in_symmetric_interval(basis20):
    t, scanned = find_covering_translate(GroupElement(), [], parse_interval("(-1,1)"), basis20)
    assert t == Translate(-e(0)) and scanned == 1


def test_covering_with_three_prior_translates(basis20):
    J = parse_interval("[0,1)")
    rng = random.Random(5)
    C = enumerate_C(J, basis20, 60)
    for trial in range(20):
        prior = []
        while len(prior) < 3:
            x = C[rng.randrange(1, 60)]
            if any(translate_contains(u, x) for u in prior):
                continue
            t, _ = find_covering_translate(x, prior, J, basis20)
            prior.append(t)
        x = next(g for g in C.emitted[1:] if not any(translate_contains(u, g) for u in prior))
        t, scanned = find_covering_translate(x, prior, J, basis20)
        assert scanned <= 7
        assert translate_contains(t, x)
        assert all(translates_disjoint(t, u) for u in prior)


def test_candidate_bound_violation_is_reported(basis20, monkeypatch):
    from steinhaus import engine
    x = GroupElement({0: -6})
    monkeypatch.setattr(engine, "translates_disjoint", lambda t, u: False)
    with pytest.raises(CandidateBoundExceeded):
        engine.find_covering_translate(x, [Translate(e(5))], parse_interval("[0,1)"), basis20)


def test_covering_requires_an_interior_point(basis20):
    with pytest.raises(InvariantViolation):
        find_covering_translate(GroupElement(), [], parse_interval("[0,1)"), basis20)


# --- decompose -------------------------------------------------------------------------

def test_single_step_starts_with_the_seed():
    d = decompose(parse_interval("[0,1)"), "1/20", 1)
    assert d.translates[0] == Translate(-e(0))
    assert d.coverage_log[0] == (0, 0)
    assert len(d.translates) == 2


def test_fifty_steps_pass_verification():
    d = decompose(parse_interval("[0,1)"), "1/20", 50)
    assert len(d.translates) == 51
    report = verify_decomposition(d, 50, 30)
    assert report.passed, report.failure
    assert all(k == 0 or n <= 2 * k + 1 for k, n in d.scan_log)


def test_interval_too_short():
    with pytest.raises(IntervalTooShort):
        decompose(parse_interval("[0,1)"), "1/4", 5)
    with pytest.raises(IntervalTooShort):
        decompose(parse_interval("[0,2/5)"), "1/20", 5)


def test_deterministic():
    a = decompose(parse_interval("(0,1]"), "1/20", 30)
    b = decompose(parse_interval("(0,1]"), "1/20", 30)
    assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())


@pytest.mark.parametrize("text,eps", [("[0,1)", "1/20"), ("(-1,1)", "1/10"), ("[-1/2,3/4]", "1/100"),
                                      ("(1/3,2]", "1/30")])
def test_greedy_progress_and_invariants(text, eps):
    d = decompose(parse_interval(text), eps, 40)
    C = enumerate_C(d.J, d.basis, 40)
    for l in range(40):
        assert sum(translate_contains(t, C[l]) for t in d.translates) == 1, l
    for t in d.translates:
        assert translate_in_interval(t, d.J, d.basis)
    for k, n in d.scan_log:
        assert n <= 2 * k + 1
    assert verify_decomposition(d, 40, 20).passed


def test_group_element_endpoints_seed_two_translates(basis20):
    J = RealInterval(GroupElement(), HI, True, True).validate(basis20)
    d = decompose(J, "1/20", 20, basis20)
    assert d.translates[:2] == [Translate(-e(0)), Translate(HI - e(1))]
    assert d.coverage_log[:2] == [(0, 0), (1, 1)]
    assert verify_decomposition(d, 20, 20).passed


def test_json_round_trip_and_field_order():
    d = decompose(parse_interval("[0,1)"), "1/20", 10)
    data = json.loads(json.dumps(d.to_dict()))
    assert list(data) == ["interval", "epsilon", "basis", "translates", "coverage_log"]
    again = Decomposition.from_dict(data)
    assert again.translates == d.translates and again.coverage_log == d.coverage_log
    assert json.dumps(again.to_dict()) == json.dumps(d.to_dict())


# --- verification -------------------------------------------------------------------------

def test_verify_single_seed():
    basis = new_basis("1/20")
    d = Decomposition(parse_interval("[0,1)"), Fraction(1, 20), basis, [Translate(-e(0))], [(0, 0)])
    assert verify_decomposition(d, 1, 10).passed


def test_verify_duplicate_translate_fails_disjointness():
    d = decompose(parse_interval("[0,1)"), "1/20", 10)
    d.translates.append(d.translates[3])
    report = verify_decomposition(d, 10, 10)
    assert not report.passed and report.checks["disjoint"] is False


@pytest.fixture(scope="module")
def run30():
    return decompose(parse_interval("[0,1)"), "1/20", 30)


@given(st.data())
def test_any_offset_mutation_is_detected(run30, data):
    d = Decomposition.from_dict(run30.to_dict())
    i = data.draw(st.integers(0, len(d.translates) - 1))
    n = data.draw(st.integers(0, 12))
    delta = data.draw(st.integers(-3, 3).filter(bool))
    d.translates[i] = Translate(d.translates[i].offset + GroupElement({n: delta}))
    assert not verify_decomposition(d, 30, 20).passed


def test_verify_reports_uncovered_points(run30):
    report = verify_decomposition(run30, 200, 10)
    assert not report.passed and report.checks["coverage"] is False


# --- uncovered witness -------------------------------------------------------------------

def test_uncovered_with_nothing_to_avoid(basis20):
    J = parse_interval("[0,1)")
    g = find_uncovered_point([], J, basis20)
    assert point_in_interval(g, J, basis20)


def test_uncovered_outside_the_seed(basis20):
    J = parse_interval("[0,1)")
    g = find_uncovered_point([Translate(-e(0))], J, basis20)
    assert not translate_contains(Translate(-e(0)), g)
    assert point_in_interval(g, J, basis20)


@pytest.mark.parametrize("k", [1, 3, 10, 40])
def test_uncovered_agrees_with_enumeration_scan(run30, k):
    ts = run30.translates[:k]
    g = find_uncovered_point(ts, run30.J, run30.basis)
    assert point_in_interval(g, run30.J, run30.basis)
    assert not any(translate_contains(t, g) for t in ts)
    scan = CEnumeration(run30.J, run30.basis)
    first = next(x for i, x in ((i, scan[i]) for i in itertools.count())
                 if not any(translate_contains(t, x) for t in ts))
    assert not any(translate_contains(t, first) for t in ts)


def test_uncovered_rejects_overlapping_input(basis20):
    with pytest.raises(InvariantViolation):
        find_uncovered_point([Translate(-e(0)), Translate(-e(0) + e(2) - e(3))],
                             parse_interval("[0,1)"), basis20)
