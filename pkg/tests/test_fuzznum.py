import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from granulab.calculi import T1, T2, T3
from granulab.errors import DomainError, ValidationError
from granulab.fuzznum import (
    DiscretizedFuzzy,
    FuzzyNumber,
    UnitFuzzyNumber,
    add,
    alpha_cut,
    brute_force_extend,
    clip_unit,
    crisp,
    div,
    extend_binary,
    features,
    membership,
    mul,
    negate,
    pow,
    sub,
)
from granulab.termset import builtin

MAYBE = FuzzyNumber(0.4, 0.6, 0.1, 0.1)
UNLIKELY = FuzzyNumber(0, 0.25, 0, 0.1)
ORACLE_TOL = 1e-3

L2_PAIRS = list(itertools.product(builtin("L2").terms, repeat=2))


def pair_id(p):
    return f"{p[0].label}-{p[1].label}"


@st.composite
def unit_numbers(draw):
    lo, a, b, hi = sorted(draw(st.floats(0.0, 1.0)) for _ in range(4))
    return UnitFuzzyNumber(a, b, a - lo, hi - b)


def quad_features(n, points=400_001):
    """Centroid and area by dense trapezoidal quadrature of the membership."""
    lo, hi = n.support
    x = np.linspace(lo, hi, points)
    mu = membership(n, x)
    area = np.trapezoid(mu, x)
    return np.trapezoid(x * mu, x) / area, area


# ---------------------------------------------------------------- basics


def test_membership_examples():
    assert membership(MAYBE, 0.35) == pytest.approx(0.5)
    assert membership(MAYBE, 0.5) == 1.0
    zero = crisp(0.0)
    assert membership(zero, 0.1) == 0.0
    assert membership(zero, 0.0) == 1.0


def test_membership_steps_at_zero_spread():
    assert membership(UNLIKELY, 0.0) == 1.0
    assert membership(UNLIKELY, -1e-9) == 0.0
    assert membership(UNLIKELY, 0.3) == pytest.approx(0.5)


@settings(max_examples=200, deadline=None)
@given(unit_numbers(), st.floats(-0.5, 1.5))
def test_membership_in_unit_interval(n, x):
    assert 0.0 <= membership(n, x) <= 1.0


def test_alpha_cut_examples():
    assert alpha_cut(MAYBE, 0.5) == pytest.approx((0.35, 0.65))
    assert alpha_cut(MAYBE, 1.0) == pytest.approx((0.4, 0.6))
    assert alpha_cut(UNLIKELY, 0.2) == pytest.approx((0.0, 0.33))
    for bad in (0.0, -0.1, 1.1):
        with pytest.raises(DomainError):
            alpha_cut(MAYBE, bad)


@settings(max_examples=200, deadline=None)
@given(unit_numbers(), st.floats(0.01, 1.0), st.floats(0.01, 1.0))
def test_alpha_cut_nesting(n, l1, l2):
    lo_l, hi_l = sorted((l1, l2))
    a1, b1 = alpha_cut(n, lo_l)
    a2, b2 = alpha_cut(n, hi_l)
    assert a1 <= a2 + 1e-15 and b2 <= b1 + 1e-15


@pytest.mark.parametrize("bad", [(0.6, 0.4, 0, 0), (0.4, 0.6, -0.1, 0), (0.4, 0.6, 0, float("nan"))])
def test_invalid_numbers_rejected(bad):
    with pytest.raises(ValidationError):
        FuzzyNumber(*bad)


def test_unit_number_checks_support():
    with pytest.raises(ValidationError):
        UnitFuzzyNumber(0.0, 0.5, 0.1, 0.0)
    assert clip_unit(FuzzyNumber(-0.2, 1.3, 0.1, 0.1)).support == (0.0, 1.0)


def test_json_round_trip():
    d = json.loads(json.dumps(MAYBE.to_dict()))
    assert d == {"a": 0.4, "b": 0.6, "alpha": 0.1, "beta": 0.1}
    assert FuzzyNumber.from_dict(d) == MAYBE


# ---------------------------------------------------------------- features


def test_feature_examples():
    c, area = features(MAYBE)
    assert c == pytest.approx(0.5)
    assert area == pytest.approx(0.3)
    assert features(FuzzyNumber(1, 1, 0, 0)) == (1.0, 0.0)


@pytest.mark.parametrize("term", builtin("L3").terms, ids=lambda t: t.label)
def test_features_against_quadrature(term):
    n = term.semantics
    if n.is_crisp:
        return
    c, area = features(n)
    qc, qa = quad_features(n)
    assert c == pytest.approx(qc, abs=1e-7)
    assert area == pytest.approx(qa, abs=1e-7)


@pytest.mark.parametrize("term", builtin("L3").terms, ids=lambda t: t.label)
def test_discretized_features_exact_for_trapezoids(term):
    assert DiscretizedFuzzy.from_fuzzy(term.semantics, 11).features() == pytest.approx(
        features(term.semantics), abs=1e-12
    )


@pytest.mark.parametrize("sel", [T1, T2, T3], ids=str)
def test_discretized_features_against_oracle_mass(sel):
    # nonlinear sides: compare with the area and centroid of the SUP-INF curve
    x, y = MAYBE, FuzzyNumber(0.63, 0.8, 0.05, 0.06)
    r = extend_binary(sel, x, y)
    o = brute_force_extend(sel, x, y)
    w = np.diff(o.edges)
    area = float(np.sum(o.mu * w))
    cent = float(np.sum(o.mu * w * o.centers)) / area
    c, a = r.features()
    assert a == pytest.approx(area, abs=2e-3)
    assert c == pytest.approx(cent, abs=2e-3)


# ---------------------------------------------------------------- negation


def test_negate_examples():
    assert negate(UNLIKELY).as_tuple() == pytest.approx((0.75, 1, 0.1, 0), abs=1e-15)
    assert negate(FuzzyNumber(1, 1, 0, 0)).as_tuple() == (0, 0, 0, 0)


@settings(max_examples=200, deadline=None)
@given(unit_numbers())
def test_negate_is_an_involution(n):
    m = negate(n)
    assert isinstance(m, UnitFuzzyNumber)
    back = negate(m)
    assert back.as_tuple() == pytest.approx(n.as_tuple(), abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(unit_numbers())
def test_negate_mirrors_features(n):
    c, area = features(n)
    mc, marea = features(negate(n))
    assert mc == pytest.approx(1 - c, abs=1e-12)
    assert marea == pytest.approx(area, abs=1e-12)


# ---------------------------------------------------------------- arithmetic


def test_arithmetic_examples():
    assert add(MAYBE, FuzzyNumber(0.2, 0.3, 0.05, 0.05)).as_tuple() == pytest.approx((0.6, 0.9, 0.15, 0.15))
    assert mul(crisp(0.5), MAYBE).as_tuple() == pytest.approx((0.2, 0.3, 0.05, 0.05))
    assert add(MAYBE, crisp(0.0)) == MAYBE
    assert (MAYBE + crisp(0.0)) == MAYBE
    assert sub(MAYBE, MAYBE).core == pytest.approx((-0.2, 0.2))


def test_div_and_pow():
    q = div(MAYBE, FuzzyNumber(2, 2, 0, 0))
    assert q.as_tuple() == pytest.approx((0.2, 0.3, 0.05, 0.05))
    with pytest.raises(DomainError):
        div(MAYBE, FuzzyNumber(0.0, 0.1, 0.0, 0.1))
    sq = pow(MAYBE, crisp(2.0))
    assert sq.core == pytest.approx((0.16, 0.36))
    assert sq.support == pytest.approx((0.09, 0.49))


@pytest.mark.parametrize("op, f", [(add, np.add), (mul, np.multiply)], ids=["add", "mul"])
@pytest.mark.parametrize("pair", L2_PAIRS, ids=pair_id)
def test_arithmetic_endpoints_against_oracle(op, f, pair):
    x, y = pair[0].semantics, pair[1].semantics
    r = op(x, y)
    o = brute_force_extend(f, x, y)
    for level, (lo, hi) in ((0.0, r.support), (1.0, r.core)):
        olo, ohi = o.cut(level)
        assert abs(olo - lo) <= ORACLE_TOL and abs(ohi - hi) <= ORACLE_TOL


# ---------------------------------------------------------------- extension


def test_extend_examples():
    r = extend_binary(T3, MAYBE, MAYBE)
    assert r.core == pytest.approx((0.4, 0.6))
    assert r == DiscretizedFuzzy.from_fuzzy(MAYBE)
    one = crisp(1.0)
    assert extend_binary(T2, one, MAYBE) == DiscretizedFuzzy.from_fuzzy(MAYBE)
    z = extend_binary(T1, UNLIKELY, UNLIKELY)
    assert np.all(z.lo == 0.0) and np.all(z.hi == 0.0)


def test_extend_resolution_checks():
    with pytest.raises(DomainError):
        extend_binary(T2, MAYBE, MAYBE, resolution=1)
    d = DiscretizedFuzzy.from_fuzzy(MAYBE, 11)
    with pytest.raises(DomainError):
        extend_binary(T2, d, MAYBE, resolution=21)
    assert extend_binary(T2, d, MAYBE, resolution=11).resolution == 11


def test_discretized_validation():
    with pytest.raises(ValidationError):
        DiscretizedFuzzy([0, 1], [0.5, 0.2], [0.4, 0.3])
    with pytest.raises(ValidationError):
        DiscretizedFuzzy([0, 0.5, 1], [0.2, 0.1, 0.3], [0.6, 0.5, 0.4])
    with pytest.raises(ValidationError):
        DiscretizedFuzzy([0.1, 1], [0, 0], [1, 1])


def test_discretized_csv_and_fit():
    d = DiscretizedFuzzy.from_fuzzy(MAYBE, 3)
    assert d.to_csv().splitlines() == ["level,lo,hi", "0,0.3,0.7", "0.5,0.35,0.65", "1,0.4,0.6"]
    assert d.to_fuzzy().as_tuple() == pytest.approx(MAYBE.as_tuple())
    assert len(d.cuts()) == 2


def test_oracle_examples():
    o = brute_force_extend(np.add, crisp(0.2), crisp(0.5))
    assert o.cut(1.0) == pytest.approx((0.7, 0.7))
    o = brute_force_extend(np.multiply, MAYBE, MAYBE)
    lo, hi = o.cut(0.0)
    assert lo == pytest.approx(0.09, abs=ORACLE_TOL)
    assert hi == pytest.approx(0.49, abs=ORACLE_TOL)
    with pytest.raises(DomainError):
        brute_force_extend(np.add, MAYBE, MAYBE, grid=5)


@pytest.mark.parametrize("sel", [T1, T2, T3], ids=str)
@pytest.mark.parametrize("pair", L2_PAIRS[::4], ids=pair_id)
def test_extend_agrees_with_oracle(sel, pair):
    x, y = pair[0].semantics, pair[1].semantics
    r = extend_binary(sel, x, y)
    o = brute_force_extend(sel, x, y)
    for level, lo, hi in zip(r.levels, r.lo, r.hi):
        olo, ohi = o.cut(level)
        assert abs(olo - lo) <= ORACLE_TOL and abs(ohi - hi) <= ORACLE_TOL
