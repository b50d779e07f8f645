import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from otrisk.discrete import (depsilon_exact, risk_from_depsilon, strassen_gap, wasserstein_p,
                             wp_lower_bound)
from otrisk.intervals import IntervalSet
from otrisk.measures import EmpiricalMeasure, pairwise_distances
from otrisk.oracles import exhaustive_min_assignment, small_transport_lp, total_variation


def point(x):
    return EmpiricalMeasure([[float(x)]])


def test_point_mass_remark():
    e = 0.37
    assert depsilon_exact(point(0), point(2 * e), eps=e).cost == 0.0
    assert depsilon_exact(point(0), point(4 * e), eps=e).cost == 1.0


def test_identity_is_free(rng):
    mu = EmpiricalMeasure(rng.normal(size=(7, 3)))
    for m in ("euclidean", "chebyshev"):
        assert depsilon_exact(mu, mu, m, 0.0).cost == 0.0


def test_threshold_straddle():
    mu = EmpiricalMeasure([[0.0], [10.0]])
    nu = EmpiricalMeasure([[0.5], [10.5]])
    assert depsilon_exact(mu, nu, "euclidean", 0.25).cost == 0.0
    assert depsilon_exact(mu, nu, "euclidean", 0.2).cost == 1.0


def test_ties_at_threshold_are_admissible():
    # distance exactly 2 eps (dyadic, so exact in floating point)
    assert depsilon_exact(point(0), point(0.5), eps=0.25).cost == 0.0


def test_matches_exhaustive_on_6x6(rng):
    for _ in range(30):
        X, Y = rng.normal(size=(6, 2)), rng.normal(size=(6, 2))
        e = float(rng.uniform(0, 1))
        C = (pairwise_distances("euclidean", X, Y) > 2 * e).astype(float)
        ref, _ = exhaustive_min_assignment(C)
        for method in ("matching", "flow", "auto"):
            assert depsilon_exact(EmpiricalMeasure(X), EmpiricalMeasure(Y), "euclidean", e,
                                  method=method).cost == pytest.approx(ref / 6, abs=1e-12)


def test_errors():
    with pytest.raises(ValueError):
        depsilon_exact(point(0), EmpiricalMeasure([[0.0]], [0.5]), eps=0.1)
    with pytest.raises(ValueError):
        depsilon_exact(point(0), EmpiricalMeasure(np.zeros((1, 2))), eps=0.1)
    with pytest.raises(ValueError):
        depsilon_exact(point(0), point(1), eps=-1)


def test_risk_from_depsilon():
    assert risk_from_depsilon(1) == 0
    assert risk_from_depsilon(0) == 0.5
    assert risk_from_depsilon(0.6827) == pytest.approx(0.15865)
    with pytest.raises(ValueError):
        risk_from_depsilon(1.5)


def test_wasserstein_examples(rng):
    assert wasserstein_p(point(0), point(-3.5), p=1) == 3.5
    x, y = rng.normal(size=50), rng.normal(size=50) + 1
    mu, nu = EmpiricalMeasure(x[:, None]), EmpiricalMeasure(y[:, None])
    assert wasserstein_p(mu, nu, p=1) == pytest.approx(np.mean(np.abs(np.sort(x) - np.sort(y))))
    X, Y = rng.normal(size=(4, 2)), rng.normal(size=(4, 2))
    D = pairwise_distances("euclidean", X, Y)
    ref = min(np.mean(D[range(4), list(p)] ** 2) for p in itertools.permutations(range(4))) ** 0.5
    assert wasserstein_p(EmpiricalMeasure(X), EmpiricalMeasure(Y), p=2) == pytest.approx(ref)


def test_wasserstein_cap():
    big = EmpiricalMeasure(np.zeros((2000, 2)))
    with pytest.raises(ValueError):
        wasserstein_p(big, big, cap=100)


def test_wp_lower_bound():
    assert wp_lower_bound(0.2, 0.1) == 0
    assert wp_lower_bound(0.0, 0.1) == 0.5
    assert wp_lower_bound(0.1, 0.1, p=1) == pytest.approx(0.25)
    assert wp_lower_bound(5.0, 0.1, p=2) == 0
    with pytest.raises(ValueError):
        wp_lower_bound(0.1, 0.0)


def test_strassen_gap_trivial_sets(rng):
    mu, nu = EmpiricalMeasure(rng.normal(size=(5, 1))), EmpiricalMeasure(rng.normal(size=(5, 1)))
    assert strassen_gap(mu, nu, IntervalSet.empty(), eps=0.3) == 0
    assert strassen_gap(mu, nu, IntervalSet.full(), eps=0.3) == pytest.approx(0, abs=1e-15)


def test_prefilter_does_not_change_result(rng):
    X, Y = rng.normal(size=(40, 2)), rng.normal(size=(40, 2))
    mu, nu = EmpiricalMeasure(X), EmpiricalMeasure(Y)
    for m in ("euclidean", "chebyshev"):
        for e in (0.05, 0.3, 1.0):
            a = depsilon_exact(mu, nu, m, e, prefilter=True).cost
            b = depsilon_exact(mu, nu, m, e, prefilter=False).cost
            assert a == b


def test_deterministic_certificates(rng):
    X, Y = rng.normal(size=(20, 2)), rng.normal(size=(20, 2))
    mu, nu = EmpiricalMeasure(X), EmpiricalMeasure(Y)
    a = depsilon_exact(mu, nu, "euclidean", 0.4)
    b = depsilon_exact(mu, nu, "euclidean", 0.4)
    assert np.array_equal(a.coupling, b.coupling)


# random weighted instances for property tests
@st.composite
def instances(draw, dim=None, uniform=False):
    d = dim or draw(st.integers(1, 3))
    n = draw(st.integers(1, 7))
    m = n if uniform else draw(st.integers(1, 7))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    r = np.random.default_rng(seed)
    # coarse lattice so coincident atoms occur
    X = r.integers(-4, 5, size=(n, d)) / 2.0
    Y = r.integers(-4, 5, size=(m, d)) / 2.0
    if uniform:
        return EmpiricalMeasure(X), EmpiricalMeasure(Y)
    a, b = r.uniform(0.1, 1, n), r.uniform(0.1, 1, m)
    return EmpiricalMeasure(X, a / a.sum()), EmpiricalMeasure(Y, b / b.sum())


metrics = st.sampled_from(["euclidean", "chebyshev"])
budgets = st.floats(0, 3)


@given(instances(), metrics)
def test_zero_budget_is_total_variation(inst, metric):
    mu, nu = inst
    assert depsilon_exact(mu, nu, metric, 0.0).cost == pytest.approx(total_variation(mu, nu), abs=1e-9)


@given(instances(), metrics, budgets, budgets)
def test_monotone_in_budget(inst, metric, e1, e2):
    mu, nu = inst
    lo, hi = sorted((e1, e2))
    assert depsilon_exact(mu, nu, metric, lo).cost >= depsilon_exact(mu, nu, metric, hi).cost - 1e-12


@given(instances(), metrics, budgets)
def test_certificate_self_consistent(inst, metric, e):
    mu, nu = inst
    cert = depsilon_exact(mu, nu, metric, e)
    cert.check(mu, nu)
    assert 0 <= cert.cost <= 1


@given(instances(), metrics, budgets)
def test_flow_matches_lp(inst, metric, e):
    mu, nu = inst
    C = (pairwise_distances(metric, mu.points, nu.points) > 2 * e).astype(float)
    ref = small_transport_lp(mu.weights, nu.weights, C)
    assert depsilon_exact(mu, nu, metric, e, method="flow").cost == pytest.approx(ref, abs=1e-9)


@given(instances(dim=1), budgets)
def test_sweep_matches_flow_in_1d(inst, e):
    mu, nu = inst
    a = depsilon_exact(mu, nu, "euclidean", e, method="sweep").cost
    b = depsilon_exact(mu, nu, "euclidean", e, method="flow").cost
    assert a == pytest.approx(b, abs=1e-12)


@given(instances(dim=1), budgets, st.lists(st.integers(-10, 10), min_size=0, max_size=6))
def test_weak_duality(inst, e, ends):
    mu, nu = inst
    ends = sorted(x / 4 for x in ends)
    A = IntervalSet(zip(ends[::2], ends[1::2]))
    assert strassen_gap(mu, nu, A, eps=e) <= depsilon_exact(mu, nu, eps=e).cost + 1e-9


@given(instances(), metrics, st.floats(0.05, 3), st.sampled_from([1.0, 2.0]))
def test_wasserstein_dominance(inst, metric, e, p):
    mu, nu = inst
    w = wasserstein_p(mu, nu, metric, p)
    assert depsilon_exact(mu, nu, metric, e).cost <= (w / (2 * e)) ** p + 1e-9


@given(instances(dim=1, uniform=True), budgets)
def test_quantile_criterion(inst, e):
    mu, nu = inst
    gap = np.max(np.abs(np.sort(mu.points[:, 0]) - np.sort(nu.points[:, 0])))
    assert (depsilon_exact(mu, nu, eps=e).cost == 0) == (gap <= 2 * e)
