"""Seeded cross-check suite behind ``otrisk verify``.

Each check compares a fast solver with a brute-force or closed-form
reference on random instances and reports the worst discrepancy.
"""

from __future__ import annotations

import numpy as np

from . import analytic
from .discrete import depsilon_exact
from .intervals import IntervalSet
from .measures import EmpiricalMeasure, Gaussian, Triangular, Uniform, pairwise_distances
from .oracles import exhaustive_min_assignment, grid_depsilon, small_transport_lp

TOL = 1e-9
GRID_TOL = 2e-3


def _result(name, worst, tol, count):
    return {"name": name, "ok": bool(worst <= tol), "worst": float(worst), "tol": tol,
            "detail": f"{count} instances, worst gap {worst:.3g} (tol {tol:g})"}


def check_matching(rng, count):
    worst = 0.0
    for _ in range(count):
        n, d = int(rng.integers(1, 7)), int(rng.integers(1, 4))
        X, Y = rng.normal(size=(n, d)), rng.normal(size=(n, d))
        metric = ("euclidean", "chebyshev")[int(rng.integers(2))]
        eps = float(rng.uniform(0, 1.2))
        mu, nu = EmpiricalMeasure(X), EmpiricalMeasure(Y)
        cert = depsilon_exact(mu, nu, metric, eps, method="matching")
        cert.check(mu, nu)
        ref, _ = exhaustive_min_assignment((pairwise_distances(metric, X, Y) > 2 * eps).astype(float))
        worst = max(worst, abs(cert.cost - ref / n))
    return _result("matching vs exhaustive assignment", worst, TOL, count)


def check_flow(rng, count):
    worst = 0.0
    for _ in range(count):
        n, m, d = int(rng.integers(1, 8)), int(rng.integers(1, 8)), int(rng.integers(1, 4))
        X, Y = rng.normal(size=(n, d)), rng.normal(size=(m, d))
        a, b = rng.uniform(0.1, 1, n), rng.uniform(0.1, 1, m)
        mu, nu = EmpiricalMeasure(X, a / a.sum()), EmpiricalMeasure(Y, b / b.sum())
        metric = ("euclidean", "chebyshev")[int(rng.integers(2))]
        eps = float(rng.uniform(0, 1.2))
        cert = depsilon_exact(mu, nu, metric, eps, method="flow")
        cert.check(mu, nu)
        C = (pairwise_distances(metric, X, Y) > 2 * eps).astype(float)
        worst = max(worst, abs(cert.cost - small_transport_lp(mu.weights, nu.weights, C)))
        if d == 1:
            worst = max(worst, abs(cert.cost - depsilon_exact(mu, nu, metric, eps, method="sweep").cost))
    return _result("flow vs transportation LP", worst, TOL, count)


def _random_family(rng, kind):
    if kind == "gaussian":
        return Gaussian(float(rng.normal()), float(rng.uniform(0.3, 1.5)))
    if kind == "uniform":
        a = float(rng.normal())
        return Uniform(a, a + float(rng.uniform(0.3, 3)))
    return Triangular(float(rng.normal()), float(rng.uniform(0.3, 2)))


def _solve(f, g, eps):
    if isinstance(f, Gaussian):
        return analytic.gaussian_general(f.mu, f.sigma, g.mu, g.sigma, eps)
    if isinstance(f, Uniform):
        return analytic.uniform_pair(f, g, eps)
    return analytic.triangular_pair(f, g, eps)


def check_analytic(rng, count):
    worst = 0.0
    for _ in range(count):
        kind = ("gaussian", "uniform", "triangular")[int(rng.integers(3))]
        f, g = _random_family(rng, kind), _random_family(rng, kind)
        eps = float(rng.uniform(0, 1))
        worst = max(worst, abs(_solve(f, g, eps).depsilon - grid_depsilon(f, g, eps)))
    return _result("closed forms vs grid discretization", worst, GRID_TOL, count)


def check_intervals(rng, count):
    worst = 0.0
    for _ in range(count):
        k = int(rng.integers(0, 5))
        pts = np.sort(rng.integers(-64, 64, size=2 * k)) / 8.0
        A = IntervalSet(zip(pts[::2], pts[1::2]))
        e = int(rng.integers(0, 16)) / 16.0
        ok = A.thin(e).issubset(A) and A.issubset(A.expand(e)) and A.expand(e).expand(e) == A.expand(2 * e)
        worst = max(worst, 0.0 if ok else 1.0)
    return _result("interval calculus identities", worst, 0.0, count)


def run_suite(seed: int = 0, scale: float = 1.0):
    rng = np.random.default_rng(seed)
    n = lambda base: max(1, int(round(base * scale)))
    return [check_matching(rng, n(200)), check_flow(rng, n(100)),
            check_analytic(rng, n(15)), check_intervals(rng, n(200))]
