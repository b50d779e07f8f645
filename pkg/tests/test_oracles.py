import numpy as np
import pytest

from otrisk.measures import EmpiricalMeasure, Gaussian, Uniform, q_tail
from otrisk.oracles import (discretize, exhaustive_min_assignment, grid_depsilon, small_transport_lp,
                            total_variation)


def test_exhaustive_examples():
    C = np.ones((4, 4)) - np.eye(4)
    assert exhaustive_min_assignment(C) == (0.0, (0, 1, 2, 3))
    val, perm = exhaustive_min_assignment([[5, 1], [1, 5]])
    assert val == 2 and perm == (1, 0)


def test_exhaustive_lexicographic_ties():
    assert exhaustive_min_assignment(np.zeros((3, 3)))[1] == (0, 1, 2)


def test_exhaustive_cap():
    with pytest.raises(ValueError):
        exhaustive_min_assignment(np.zeros((9, 9)))


def test_small_lp_examples():
    assert small_transport_lp([0.5, 0.5], [0.5, 0.5], np.zeros((2, 2))) == pytest.approx(0)
    assert small_transport_lp([1.0], [1.0], [[1.0]]) == pytest.approx(1)
    assert small_transport_lp([1.0], [1.0], [[0.0]]) == pytest.approx(0)
    with pytest.raises(ValueError):
        small_transport_lp([1.0], [0.5], [[0.0]])
    with pytest.raises(ValueError):
        small_transport_lp(np.full(65, 1 / 65), np.full(65, 1 / 65), np.zeros((65, 65)))


def test_discretize_uniform():
    g = discretize(Uniform(0, 1), 10)
    assert np.allclose(g.weights, 0.1) and abs(g.weights.sum() - 1) < 1e-12


def test_discretize_gaussian_coverage():
    g = discretize(Gaussian(0, 1), 1001, coverage=0.99)
    assert abs(g.coverage - 0.99) < 1e-9
    assert abs(g.weights.sum() - 1) < 1e-10


def test_discretize_rejects_tiny_grid():
    with pytest.raises(ValueError):
        discretize(Gaussian(0, 1), 2)


def test_grid_tv_converges():
    exact = 1 - 2 * q_tail(0.5)  # TV of N(0,1) and N(1,1)
    errs = [abs(grid_depsilon(Gaussian(0, 1), Gaussian(1, 1), 0.0, n=n) - exact) for n in (101, 401, 1601)]
    assert errs[2] < errs[0] and errs[2] < 2e-3


def test_total_variation_merges_atoms():
    mu = EmpiricalMeasure([[0.0], [1.0]])
    nu = EmpiricalMeasure([[1.0], [2.0]])
    assert total_variation(mu, nu) == pytest.approx(0.5)
