"""Brute-force references used to cross-check the fast solvers.

These are deliberately slow and size-capped; they exist so that the
verification suite (``otrisk verify``) can run outside the test tree.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .measures import EmpiricalMeasure, Gaussian, Triangular, Uniform, q_tail

MAX_ASSIGNMENT_N = 8
MAX_LP_ATOMS = 64


def exhaustive_min_assignment(costs):
    """Minimum-cost perfect assignment by enumerating all permutations.

    Ties are broken lexicographically (the first optimal permutation in
    ``itertools.permutations`` order wins).

    >>> exhaustive_min_assignment([[0, 1], [1, 0]])
    (0.0, (0, 1))
    """
    C = np.asarray(costs, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ValueError("cost matrix must be square")
    n = C.shape[0]
    if n > MAX_ASSIGNMENT_N:
        raise ValueError(f"exhaustive assignment is capped at n={MAX_ASSIGNMENT_N}")
    best, best_perm = math.inf, tuple(range(n))
    rows = np.arange(n)
    for perm in itertools.permutations(range(n)):
        v = float(C[rows, perm].sum())
        if v < best:
            best, best_perm = v, perm
    return best, tuple(best_perm)


def small_transport_lp(a, b, costs, max_atoms=MAX_LP_ATOMS) -> float:
    """Exact optimum of a small transportation problem.

    Solved as a dense LP with the HiGHS dual simplex, which returns a
    vertex of the transportation polytope.
    """
    from scipy.optimize import linprog

    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    C = np.asarray(costs, dtype=float)
    n, m = C.shape
    if n != len(a) or m != len(b):
        raise ValueError("cost matrix shape does not match the weights")
    if max(n, m) > max_atoms:
        raise ValueError(f"transport LP is capped at {max_atoms} atoms per side")
    if abs(a.sum() - b.sum()) > 1e-9:
        raise ValueError("source and target masses differ")
    A_eq = np.zeros((n + m, n * m))
    for i in range(n):
        A_eq[i, i * m:(i + 1) * m] = 1.0
    for j in range(m):
        A_eq[n + j, j::m] = 1.0
    res = linprog(C.ravel(), A_eq=A_eq, b_eq=np.concatenate([a, b]), bounds=(0, None),
                  method="highs-ds", options={"primal_feasibility_tolerance": 1e-10,
                                              "dual_feasibility_tolerance": 1e-10})
    if res.status != 0:
        raise RuntimeError(f"transport LP failed: {res.message}")
    return float(res.fun)


@dataclass(frozen=True)
class GaussianMixture1D:
    """Equal-weight mixture of ``N(c_k, sigma^2)`` on the line."""

    centers: tuple
    sigma: float

    dim = 1

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        c = np.asarray(self.centers, dtype=float)
        return np.mean(q_tail(-(x[..., None] - c) / self.sigma), axis=-1)

    def support_range(self, coverage):
        z = -float(np.asarray(Gaussian(0.0, 1.0).quantile((1.0 - coverage) / 2.0)))
        return min(self.centers) - z * self.sigma, max(self.centers) + z * self.sigma


@dataclass(frozen=True)
class GridMeasure:
    """Atoms at cell midpoints carrying the exact cell masses (renormalized)."""

    points: np.ndarray
    weights: np.ndarray
    coverage: float

    def to_empirical(self) -> EmpiricalMeasure:
        return EmpiricalMeasure(self.points, self.weights)


def _range(family, coverage):
    if isinstance(family, Uniform):
        return family.a, family.b
    if isinstance(family, Triangular):
        return family.support()
    if isinstance(family, GaussianMixture1D):
        return family.support_range(coverage)
    tail = (1.0 - coverage) / 2.0
    return float(family.quantile(tail)), float(family.quantile(1.0 - tail))


def discretize(family, n: int, coverage: float = 1.0 - 1e-6, bounds=None) -> GridMeasure:
    """Midpoint-rule discretization of a univariate law on ``n`` cells.

    Bounded families are covered fully; Gaussian-type laws on their
    central ``coverage`` range. ``bounds`` overrides the range, which lets
    two laws share one lattice. Each atom receives the exact probability of
    its cell, then weights are renormalized to sum to one.
    """
    if n < 3:
        raise ValueError("need at least 3 grid cells")
    lo, hi = _range(family, coverage) if bounds is None else bounds
    edges = np.linspace(lo, hi, n + 1)
    cdf = np.asarray(family.cdf(edges), dtype=float)
    w = np.diff(cdf)
    w = np.maximum(w, 0.0)
    covered = float(w.sum())
    mids = 0.5 * (edges[:-1] + edges[1:])
    return GridMeasure(points=mids, weights=w / covered, coverage=covered)


def grid_depsilon(f, g, eps, n=4001, coverage=1.0 - 1e-6) -> float:
    """``D_eps`` between discretizations of two univariate laws on a shared lattice.

    A common lattice keeps coincident atoms coincident, so ``eps = 0``
    recovers the total variation of the binned laws.
    """
    from .discrete import depsilon_exact

    (lo_f, hi_f), (lo_g, hi_g) = _range(f, coverage), _range(g, coverage)
    bounds = (min(lo_f, lo_g), max(hi_f, hi_g))
    mu = _nonzero(discretize(f, n, coverage, bounds))
    nu = _nonzero(discretize(g, n, coverage, bounds))
    return depsilon_exact(mu, nu, "euclidean", eps, method="sweep").cost


def _nonzero(grid: GridMeasure) -> EmpiricalMeasure:
    keep = grid.weights > 0
    return EmpiricalMeasure(grid.points[keep], grid.weights[keep])


def total_variation(mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> float:
    """Total variation between two finite measures, merging identical atoms."""
    acc = {}
    for pts, w, sign in ((mu.points, mu.weights, 1.0), (nu.points, nu.weights, -1.0)):
        for p, wi in zip(map(tuple, pts), w):
            acc[p] = acc.get(p, 0.0) + sign * wi
    return 0.5 * sum(abs(v) for v in acc.values())
