import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from otrisk.loss_bounds import (LossBoundInputs, QuadraticToy, convex_lower_bound, deviation_bound,
                                lipschitz_upper_bound)


def test_convex_lower_examples():
    assert convex_lower_bound(LossBoundInputs(0.1, 0.0, grad_dual_norm_exp=2)) == 0.1
    assert convex_lower_bound(LossBoundInputs(0.1, 0.05, grad_dual_norm_exp=2)) == pytest.approx(0.2)
    assert convex_lower_bound(LossBoundInputs(0.1, 0.5, grad_dual_norm_exp=0)) == 0.1


def test_lipschitz_upper_examples():
    assert lipschitz_upper_bound(LossBoundInputs(0.1, 0.0, lipschitz=3)) == 0.1
    assert lipschitz_upper_bound(LossBoundInputs(0.1, 0.1, lipschitz=3)) == pytest.approx(0.4)


def test_deviation_examples():
    assert deviation_bound(LossBoundInputs(0.1, 0.0, lipschitz=1, hessian_min_eig=4))[0] == 0
    b, warn = deviation_bound(LossBoundInputs(0.1, 0.04, lipschitz=1, hessian_min_eig=4))
    assert b == pytest.approx(0.1) and not warn
    b2, _ = deviation_bound(LossBoundInputs(0.1, 0.08, lipschitz=1, hessian_min_eig=4))
    assert b2 == pytest.approx(b * math.sqrt(2))
    assert deviation_bound(LossBoundInputs(0.1, 5.0, lipschitz=1, hessian_min_eig=4))[1]


def test_missing_fields_and_bad_values():
    with pytest.raises(ValueError):
        convex_lower_bound(LossBoundInputs(0.1, 0.1))
    with pytest.raises(ValueError):
        lipschitz_upper_bound(LossBoundInputs(0.1, 0.1))
    with pytest.raises(ValueError):
        deviation_bound(LossBoundInputs(0.1, 0.1, lipschitz=1, hessian_min_eig=0))
    with pytest.raises(ValueError):
        LossBoundInputs(-0.1, 0.1)


nonneg = st.floats(0, 10)


@given(nonneg, nonneg, nonneg, st.floats(0, 1))
def test_lower_below_upper(r0, a, b, e):
    g, L = sorted((a, b))
    inp = LossBoundInputs(r0, e, grad_dual_norm_exp=g, lipschitz=L)
    assert convex_lower_bound(inp) <= lipschitz_upper_bound(inp)


@given(nonneg, nonneg, st.floats(0.01, 10), st.floats(0, 2), st.floats(0, 2))
def test_nondecreasing_in_eps(r0, L, lam, e1, e2):
    lo, hi = sorted((e1, e2))
    mk = lambda e: LossBoundInputs(r0, e, grad_dual_norm_exp=L, lipschitz=L, hessian_min_eig=lam)
    for fn in (convex_lower_bound, lipschitz_upper_bound, lambda i: deviation_bound(i)[0]):
        assert fn(mk(lo)) <= fn(mk(hi))


def test_toy_closed_forms():
    toy = QuadraticToy()
    for e in np.linspace(0, 0.5, 11):
        w, r = toy.measured(e)
        assert w == pytest.approx(toy.minimizer(e), abs=1e-7)
        assert r == pytest.approx(toy.optimal_risk(e), abs=1e-12)


def test_toy_sandwich_and_deviation():
    toy = QuadraticToy()
    w0 = toy.measured(0.0)[0]
    for e in np.linspace(0, 0.5, 20):
        inp = toy.inputs(e)
        w, r = toy.measured(e)
        assert convex_lower_bound(inp) - 1e-12 <= r <= lipschitz_upper_bound(inp) + 1e-12
        bound, warn = deviation_bound(inp)
        if not warn:
            assert abs(w - w0) <= bound + 1e-9


def test_toy_range():
    with pytest.raises(ValueError):
        QuadraticToy().inputs(0.6)
    with pytest.raises(ValueError):
        QuadraticToy(p=1.0)
