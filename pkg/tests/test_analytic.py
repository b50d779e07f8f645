import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq

from otrisk import analytic
from otrisk.analytic import Restriction, check_scrunch_condition, check_shift_condition
from otrisk.discrete import strassen_gap
from otrisk.intervals import INF, classifier_risk
from otrisk.measures import Gaussian, IsoGaussian, Triangular, Uniform, q_tail
from otrisk.oracles import grid_depsilon


def closes_duality(sol, eps, tol=1e-9):
    pr = sol.problem
    assert abs(strassen_gap(pr.class1, pr.class0, sol.classifier, eps=eps) - sol.depsilon) <= tol
    assert abs(classifier_risk(pr, sol.classifier, eps) - sol.risk) <= tol


# equal variance, 1-D and d-D

def test_equal_var_examples():
    s = analytic.gaussian_equal_var(0, 2, 1, 1)
    assert s.risk == 0.5 and s.degenerate
    assert analytic.gaussian_equal_var(0, 2, 1, 0).risk == pytest.approx(q_tail(1), abs=1e-15)
    s = analytic.gaussian_equal_var(0, 2, 1, 0.5)
    assert s.risk == pytest.approx(q_tail(0.5), abs=1e-15)
    assert abs(grid_depsilon(Gaussian(0, 1), Gaussian(2, 1), 0.5) - s.depsilon) < 2e-3
    closes_duality(s, 0.5)


def test_equal_var_rejects_bad_sigma():
    with pytest.raises(ValueError):
        analytic.gaussian_equal_var(0, 1, 0, 0.1)


def test_iso_examples():
    p0 = IsoGaussian((0.0, 0.0), 1.0)
    assert analytic.gaussian_iso_ddim(p0, p0, 0.1).risk == 0.5
    s = analytic.gaussian_iso_ddim(p0, IsoGaussian((3.0, 4.0), 1.0), 0.0)
    assert s.risk == pytest.approx(q_tail(2.5), abs=1e-15)
    closes_duality(s, 0.0)
    s = analytic.gaussian_iso_ddim(p0, IsoGaussian((3.0, 4.0), 1.0), 2.5)
    assert s.risk == 0.5 and s.degenerate


def test_iso_requires_equal_sigma():
    with pytest.raises(ValueError):
        analytic.gaussian_iso_ddim(IsoGaussian((0.0,), 1.0), IsoGaussian((1.0,), 2.0), 0.1)


# intersections

def test_intersections():
    r = analytic.gaussian_intersections(Gaussian(0, 1), Gaussian(0, 2))
    assert r.count == 2 and r.s1 == pytest.approx(-r.s2, rel=1e-14)
    r = analytic.gaussian_intersections(Gaussian(0, 1), Gaussian(2, 1))
    assert r.count == 1 and r.s1 == pytest.approx(1.0, abs=1e-15)
    r = analytic.gaussian_intersections(Gaussian(0, 1), Gaussian(1, 2))
    f, g = Gaussian(0, 1), Gaussian(1, 2)
    h = lambda x: float(f.pdf(x) - g.pdf(x))
    ref = [brentq(h, -10, 0.5), brentq(h, 0.5, 10)]
    assert r.count == 2 and np.allclose(r.roots, sorted(ref), atol=1e-12)


# same mean

def test_same_mean_two_scale_example():
    s = analytic.gaussian_same_mean(1.0, 0.5, 0.3)
    w, risk = analytic.motivating_example(1.0, 0.5, 0.3)
    assert abs(s.boundaries["m"] - w) < 1e-8
    assert abs(s.risk - risk) < 1e-9
    f, g = Gaussian(0, 1), Gaussian(0, 0.5)
    assert abs(float(g.pdf(w - 0.3)) - float(f.pdf(w + 0.3))) < 1e-9
    closes_duality(s, 0.3)


def test_same_mean_bayes_is_tv():
    s = analytic.gaussian_same_mean(1.0, 0.5, 0.0)
    f, g = Gaussian(0, 1), Gaussian(0, 0.5)
    tv = 0.5 * quad(lambda x: abs(float(f.pdf(x) - g.pdf(x))), -12, 12, points=[-1, 1], limit=200)[0]
    assert s.depsilon == pytest.approx(tv, abs=1e-9)
    roots = analytic.gaussian_intersections(f, g)
    assert s.boundaries["m"] == pytest.approx(roots.s2, abs=1e-12)


def test_same_mean_near_equal_variance():
    s = analytic.gaussian_same_mean(1.0, 0.999, 0.01)
    assert 0.49 < s.risk <= 0.5


def test_same_mean_requires_order():
    with pytest.raises(ValueError):
        analytic.gaussian_same_mean(0.5, 1.0, 0.1)


@given(st.floats(0.3, 3), st.floats(0.1, 0.95), st.floats(0, 1.5))
def test_same_mean_boundary_equation(s1, ratio, e):
    s = analytic.gaussian_same_mean(s1, s1 * ratio, e)
    if not s.degenerate:
        m = s.boundaries["m"]
        f, g = Gaussian(0, s1), Gaussian(0, s1 * ratio)
        peak = float(g.pdf(0))
        assert abs(float(f.pdf(m + e)) - float(g.pdf(m - e))) <= 1e-10 * peak
    closes_duality(s, e)


# general Gaussians

def test_general_reduces_to_same_mean():
    a = analytic.gaussian_general(0.0, 1.0, 0.0, 0.5, 0.3)
    b = analytic.gaussian_same_mean(1.0, 0.5, 0.3)
    assert a.depsilon == pytest.approx(b.depsilon, abs=1e-12)


@pytest.mark.parametrize("e", [0.0, 0.3, 0.6, 0.9])
def test_general_near_equal_variance(e):
    # the reference law sits at the mean scale; either endpoint is off by O(1e-4) from the scale change alone
    a = analytic.gaussian_general(0.0, 1.0, 2.0, 1.001, e)
    b = analytic.gaussian_equal_var(0.0, 2.0, 1.0005, e)
    assert abs(a.risk - b.risk) < 1e-4


@given(st.floats(-2, 2), st.floats(0.3, 2), st.floats(-2, 2), st.floats(0.3, 2), st.floats(0, 1.5))
def test_general_duality(m1, s1, m2, s2, e):
    closes_duality(analytic.gaussian_general(m1, s1, m2, s2, e), e)


def test_general_against_grid(rng):
    for _ in range(4):
        m1, m2 = rng.normal(size=2)
        s1, s2 = rng.uniform(0.4, 1.5, size=2)
        e = float(rng.uniform(0, 0.8))
        s = analytic.gaussian_general(m1, s1, m2, s2, e)
        assert abs(s.depsilon - grid_depsilon(Gaussian(m1, s1), Gaussian(m2, s2), e)) < 2e-3


# uniform

def test_uniform_examples():
    s = analytic.uniform_pair((0, 1), (0, 1), 0.2)
    assert s.depsilon == 0 and s.risk == 0.5
    s = analytic.uniform_pair((0, 1), (0, 10), 0)
    assert s.depsilon == pytest.approx(0.9) and s.risk == pytest.approx(0.05)
    assert abs(grid_depsilon(Uniform(0, 1), Uniform(0, 10), 0) - 0.9) < 2e-3
    s = analytic.uniform_pair((0, 1), (5, 6), 0.1)
    assert s.depsilon == 1 and s.risk == 0


@given(st.floats(-3, 3), st.floats(0.2, 3), st.floats(-3, 3), st.floats(0.2, 3), st.floats(0, 1))
def test_uniform_duality(a, w, c, v, e):
    closes_duality(analytic.uniform_pair((a, a + w), (c, c + v), e), e)


# triangular

def test_triangular_examples():
    assert analytic.triangular_pair(Triangular(0, 1), Triangular(0, 1), 0.2).risk == 0.5
    f, g = Triangular(0, 1), Triangular(0, 3)
    tv = 0.5 * quad(lambda x: abs(float(f.pdf(x) - g.pdf(x))), -3, 3, points=[-1, 0, 1], limit=200)[0]
    assert analytic.triangular_pair(f, g, 0).depsilon == pytest.approx(tv, abs=1e-9)
    s = analytic.triangular_pair(Triangular(0, 1), Triangular(0.5, 2), 0.1)
    assert abs(s.depsilon - grid_depsilon(Triangular(0, 1), Triangular(0.5, 2), 0.1)) < 2e-3


@given(st.floats(-2, 2), st.floats(0.2, 2), st.floats(-2, 2), st.floats(0.2, 2), st.floats(0, 1))
def test_triangular_duality(m1, d1, m2, d2, e):
    closes_duality(analytic.triangular_pair(Triangular(m1, d1), Triangular(m2, d2), e), e)


# shared properties

SWEEPS = {
    "equal": lambda e: analytic.gaussian_equal_var(0.3, -0.9, 0.8, e),
    "same": lambda e: analytic.gaussian_same_mean(1.3, 0.4, e),
    "general": lambda e: analytic.gaussian_general(0.2, 0.6, -0.5, 1.1, e),
    "uniform": lambda e: analytic.uniform_pair((0, 2), (1, 1.5), e),
    "triangular": lambda e: analytic.triangular_pair(Triangular(0, 1), Triangular(1, 0.5), e),
}


@pytest.mark.parametrize("name", sorted(SWEEPS))
def test_risk_range_and_monotone(name):
    risks = [SWEEPS[name](e).risk for e in np.linspace(0, 2, 41)]
    assert all(risks[0] - 1e-12 <= r <= 0.5 for r in risks)
    assert all(b >= a - 1e-12 for a, b in zip(risks, risks[1:]))


# quantile criterion and lemma checks

def test_quantile_sup_distance():
    assert analytic.quantile_sup_distance(Gaussian(0, 1), Gaussian(0, 1)) == 0
    assert analytic.quantile_sup_distance(Gaussian(0, 1), Gaussian(1.7, 1)) == pytest.approx(1.7, abs=1e-9)
    assert analytic.quantile_sup_distance(Uniform(0, 1), Uniform(0, 2)) == pytest.approx(1, abs=1e-3)


def test_zero_cost_check():
    assert analytic.zero_cost_check(Triangular(0, 1), Triangular(0, 1), 0.0)
    assert not analytic.zero_cost_check(Gaussian(0, 1), Gaussian(3, 1), 1)
    assert analytic.zero_cost_check(Gaussian(0, 1), Gaussian(1.9, 1), 1)


def test_zero_cost_implies_small_grid_cost():
    f, g = Triangular(0, 1), Triangular(0.5, 1.2)
    e = analytic.quantile_sup_distance(f, g) / 2 + 0.01
    assert analytic.zero_cost_check(f, g, e)
    assert grid_depsilon(f, g, e) < 2e-3


def test_shift_condition():
    e = 0.25
    expo = lambda x: np.exp(-np.asarray(x, dtype=float))
    g = Restriction(expo, 0.0, INF)
    f = Restriction(lambda x: expo(np.asarray(x) - 2 * e), 2 * e, INF)
    assert check_shift_condition(f, g, e)
    assert not check_shift_condition(Restriction(expo, 0.1, INF), g, e)
    # mirrored left tails
    assert check_shift_condition(f.mirrored(), g.mirrored(), e)


def test_shift_condition_inside_same_mean():
    s1, s2, e = 1.0, 0.5, 0.3
    m = analytic.gaussian_same_mean(s1, s2, e).boundaries["m"]
    f, g = Gaussian(0, s1), Gaussian(0, s2)
    # outer tails of the wide law cover the narrow law's tails shifted by 2 eps
    assert check_shift_condition(Restriction(f.pdf, m + e, INF), Restriction(g.pdf, m - e, INF), e)
    assert check_shift_condition(Restriction(f.pdf, -INF, -m - e), Restriction(g.pdf, -INF, -m + e), e)


def test_scrunch_condition():
    e = 0.1
    f = Restriction(lambda x: np.ones_like(np.asarray(x, dtype=float)), 0.0, 1.0)
    g = Restriction(lambda x: np.full_like(np.asarray(x, dtype=float), 1 / (1 - 2 * e)), 2 * e, 1.0)
    assert check_scrunch_condition(f, g, e)
    assert check_scrunch_condition(f.mirrored(), g.mirrored(), e)
    wrong_mass = Restriction(lambda x: np.full_like(np.asarray(x, dtype=float), 2.0), 2 * e, 1.0)
    assert not check_scrunch_condition(f, wrong_mass, e)


def test_motivating_reduction():
    w, risk = analytic.motivating_example(1.0, 0.5, 0.0)
    s = analytic.gaussian_same_mean(1.0, 0.5, 0.0)
    assert w == pytest.approx(s.boundaries["m"], abs=1e-12)
    assert risk == pytest.approx(s.risk, abs=1e-12)
