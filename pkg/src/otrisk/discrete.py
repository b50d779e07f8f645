"""Exact threshold transport between finite measures.

``D_eps(mu, nu)`` is the optimal transport cost for the 0-1 cost
``1{d(x, y) > 2 eps}``. Because a pair is either free or costs exactly one
unit, the minimum-cost plan routes as much mass as possible along free
("admissible") pairs and moves the rest arbitrarily, so

    D_eps = 1 - (maximum mass routable along pairs with d <= 2 eps).

For uniform weights with equal counts this is a maximum-cardinality
bipartite matching; in general it is a single max-flow. Minimum cuts give
the dual witness set ``A`` with ``mu(A^-eps) - nu(A^eps) = D_eps``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import _flow
from .intervals import Halfspace, IntervalSet, expand, thin
from .measures import PROBABILITY_TOL, EmpiricalMeasure, Metric, pairwise_distances

#: Above this many candidate pairs the admissibility graph is built band-wise.
DENSE_PAIR_LIMIT = 4_000_000

#: Largest support (per side) accepted by :func:`wasserstein_p` in dimension > 1.
WASSERSTEIN_EXACT_CAP = 512

#: Residual capacities below this count as saturated in the flow solver.
FLOW_TOL = 1e-14


@dataclass(frozen=True)
class TransportCertificate:
    """Value of ``D_eps`` together with a primal plan and (optionally) a dual witness.

    ``coupling`` is an ``(k, 3)`` array of ``(source index, target index,
    mass)`` rows. ``witness`` is a region ``A`` (interval set on the line)
    with ``mu(A^-eps) - nu(A^eps) = cost``; ``witness_support`` lists the
    source atoms of the finite min-cut set it was built from.
    """

    cost: float
    coupling: np.ndarray
    eps: float
    metric: Metric
    method: str
    matched_mass: float
    witness: Optional[IntervalSet] = None
    witness_support: Optional[Tuple[int, ...]] = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def risk(self) -> float:
        return risk_from_depsilon(self.cost)

    def check(self, mu: EmpiricalMeasure, nu: EmpiricalMeasure, tol: float = 1e-9) -> dict:
        """Verify marginals, cost self-consistency and the duality gap.

        Returns a dict of measured residuals; raises ``AssertionError`` on
        violation.
        """
        rows = self.coupling
        src = np.zeros(mu.size)
        dst = np.zeros(nu.size)
        if len(rows):
            i = rows[:, 0].astype(np.int64)
            j = rows[:, 1].astype(np.int64)
            np.add.at(src, i, rows[:, 2])
            np.add.at(dst, j, rows[:, 2])
            d = np.array([_pair_distance(self.metric, mu.points[a], nu.points[b]) for a, b in zip(i, j)])
            far = float(rows[d > 2 * self.eps, 2].sum())
        else:
            far = 0.0
        out = {
            "marginal_src": float(np.abs(src - mu.weights).max()),
            "marginal_dst": float(np.abs(dst - nu.weights).max()),
            "far_mass_gap": abs(far - self.cost * mu.total_mass),
        }
        if self.witness is not None:
            scale = 1.0 + float(np.abs(mu.points).max(initial=0.0)) + float(np.abs(nu.points).max(initial=0.0))
            gap = strassen_gap(mu, nu, self.witness, self.metric, self.eps, atol=1e-12 * scale)
            out["duality_gap"] = abs(self.cost - gap)
        elif self.witness_support is not None:
            # ball-union witness: its thinning holds the support, its expansion
            # meets exactly the targets within 2 eps of the support
            S = list(self.witness_support)
            inner = float(mu.weights[S].sum())
            if S:
                near = pairwise_distances(self.metric, nu.points, mu.points[S]).min(axis=1) <= 2 * self.eps
                outer = float(nu.weights[near].sum())
            else:
                outer = 0.0
            out["duality_gap"] = abs(self.cost - (inner - outer))
        bad = {k: v for k, v in out.items() if v > tol}
        if bad:
            raise AssertionError(f"certificate check failed: {bad}")
        return out


def _pair_distance(metric, x, y):
    diff = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    if diff.size == 1:
        return float(diff[0])
    return float(pairwise_distances(metric, x[None, :], y[None, :])[0, 0])


def _validate_pair(mu, nu):
    if not isinstance(mu, EmpiricalMeasure) or not isinstance(nu, EmpiricalMeasure):
        raise TypeError("depsilon_exact expects two EmpiricalMeasure instances")
    if mu.dim != nu.dim:
        raise ValueError(f"dimension mismatch: {mu.dim} vs {nu.dim}")
    if abs(mu.total_mass - nu.total_mass) > PROBABILITY_TOL:
        raise ValueError(
            f"total masses differ ({mu.total_mass!r} vs {nu.total_mass!r}); "
            "unequal-mass transport is not defined here"
        )
    if not mu.is_probability:
        raise ValueError(f"expected probability measures, total mass is {mu.total_mass!r}")


def admissible_graph(mu, nu, metric, eps, prefilter=None):
    """CSR adjacency ``(indptr, indices)`` of pairs with ``d(x_i, y_j) <= 2 eps``.

    With ``prefilter`` the candidate targets of each source are first
    restricted to a band on the first coordinate (every coordinate gap is a
    lower bound on both metrics); the final decision always uses the full
    distance, so the edge set is identical either way.
    """
    metric = Metric.parse(metric)
    thr = 2.0 * eps
    X, Y = mu.points, nu.points
    n, m = X.shape[0], Y.shape[0]
    if prefilter is None:
        prefilter = n * m > DENSE_PAIR_LIMIT
    if not prefilter:
        D = pairwise_distances(metric, X, Y)
        adj = D <= thr
        indptr = np.concatenate([[0], np.cumsum(adj.sum(axis=1))]).astype(np.int64)
        indices = np.nonzero(adj)[1].astype(np.int64)
        return indptr, indices

    order = np.argsort(Y[:, 0], kind="stable")
    key = Y[order, 0]
    slack = thr * (1.0 + 1e-12) + 1e-300
    indptr = [0]
    chunks = []
    for i in range(n):
        lo = np.searchsorted(key, X[i, 0] - slack, side="left")
        hi = np.searchsorted(key, X[i, 0] + slack, side="right")
        cand = order[lo:hi]
        if len(cand):
            d = pairwise_distances(metric, X[i:i + 1], Y[cand])[0]
            hit = np.sort(cand[d <= thr])
        else:
            hit = cand
        chunks.append(hit.astype(np.int64))
        indptr.append(indptr[-1] + len(hit))
    indices = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return np.asarray(indptr, dtype=np.int64), indices


def _fill_leftover(a_rem, b_rem):
    """North-west-corner plan for the mass that could not be routed for free."""
    pairs = []
    i = j = 0
    a_rem = a_rem.copy()
    b_rem = b_rem.copy()
    while i < len(a_rem) and j < len(b_rem):
        if a_rem[i] <= 0:
            i += 1
            continue
        if b_rem[j] <= 0:
            j += 1
            continue
        f = min(a_rem[i], b_rem[j])
        pairs.append((i, j, f))
        a_rem[i] -= f
        b_rem[j] -= f
    return pairs


def _rows(pairs):
    if not pairs:
        return np.zeros((0, 3))
    return np.asarray(pairs, dtype=float)


def _witness_from_cut(mu, reach, eps):
    support = tuple(int(i) for i in np.nonzero(reach)[0])
    if mu.dim != 1:
        return None, support
    A0 = IntervalSet.points(mu.points[list(support), 0]) if support else IntervalSet.empty()
    return A0.expand(eps), support


def depsilon_exact(mu, nu, metric=Metric.EUCLIDEAN, eps=0.0, method="auto", prefilter=None):
    """Exact ``D_eps`` between two finite probability measures.

    Parameters
    ----------
    mu, nu : EmpiricalMeasure
        Probability measures of the same dimension.
    metric : Metric or str
        ``"euclidean"`` or ``"chebyshev"``.
    eps : float
        Adversarial budget; a pair is free when ``d <= 2 * eps``.
    method : {"auto", "matching", "flow", "sweep"}
        ``matching`` needs uniform weights and equal counts, ``sweep`` needs
        dimension one. ``auto`` picks matching, then sweep, then flow.
    prefilter : bool or None
        Force the band prefilter on or off when building the graph.

    Returns
    -------
    TransportCertificate
    """
    if not eps >= 0 or not math.isfinite(eps):
        raise ValueError(f"eps must be a finite nonnegative number, got {eps}")
    metric = Metric.parse(metric)
    _validate_pair(mu, nu)
    n, m = mu.size, nu.size
    uniform_square = n == m and mu.is_uniform and nu.is_uniform
    if method == "auto":
        method = "matching" if uniform_square else ("sweep" if mu.dim == 1 else "flow")
    if method == "matching" and not uniform_square:
        raise ValueError("matching needs uniform weights and equal counts")
    if method == "sweep" and mu.dim != 1:
        raise ValueError("the sweep solver is one-dimensional")

    a, b = mu.weights, nu.weights
    witness = support = None
    diagnostics = {"n_source": n, "n_target": m}

    if method == "sweep":
        routed, pairs = _flow.sweep_1d(mu.points[:, 0], a, nu.points[:, 0], b, 2.0 * eps)
    else:
        indptr, indices = admissible_graph(mu, nu, metric, eps, prefilter)
        diagnostics["n_edges"] = int(len(indices))
        if method == "matching":
            match, reach = _flow.max_matching(indptr, indices, n, m)
            w = a[0]
            pairs = [(i, int(j), w) for i, j in enumerate(match) if j >= 0]
            routed = len(pairs) * w
            diagnostics["matched_pairs"] = len(pairs)
        elif method == "flow":
            routed, pairs, reach = _flow.max_flow(a, b, indptr, indices, tol=FLOW_TOL)
        else:
            raise ValueError(f"unknown method {method!r}")
        witness, support = _witness_from_cut(mu, reach, eps)

    a_rem = a.astype(float).copy()
    b_rem = b.astype(float).copy()
    for i, j, f in pairs:
        a_rem[i] -= f
        b_rem[j] -= f
    np.maximum(a_rem, 0.0, out=a_rem)
    np.maximum(b_rem, 0.0, out=b_rem)
    coupling = _rows(pairs + _fill_leftover(a_rem, b_rem))

    total = mu.total_mass
    if method == "matching":
        # integer count keeps the cost exact
        cost = (n - len(pairs)) / n
    else:
        cost = float(min(1.0, max(0.0, (total - routed) / total)))
    return TransportCertificate(
        cost=cost,
        coupling=coupling,
        eps=float(eps),
        metric=metric,
        method=method,
        matched_mass=float(routed),
        witness=witness,
        witness_support=support,
        diagnostics=diagnostics,
    )


def risk_from_depsilon(cost: float) -> float:
    """Optimal balanced 0-1 robust risk ``(1 - D_eps) / 2``."""
    if not (-1e-12 <= cost <= 1.0 + 1e-12):
        raise ValueError(f"transport cost must lie in [0, 1], got {cost}")
    return (1.0 - min(1.0, max(0.0, cost))) / 2.0


def strassen_gap(mu, nu, A, metric=Metric.EUCLIDEAN, eps=0.0, atol=0.0) -> float:
    """Dual objective ``mu(A^-eps) - nu(A^eps)``; never exceeds ``D_eps(mu, nu)``.

    ``mu`` and ``nu`` may be empirical measures or analytic laws; ``A`` an
    :class:`IntervalSet` (dimension one) or a :class:`Halfspace`.
    ``atol`` widens point membership for empirical measures and only exists
    to absorb rounding in endpoints produced by ``expand``/``thin``.
    """
    if not isinstance(A, (IntervalSet, Halfspace)):
        raise TypeError(f"unsupported set representation {type(A).__name__}")
    inner = thin(A, eps, metric)
    outer = expand(A, eps, metric)
    return _mass(mu, inner, atol) - _mass(nu, outer, atol)


def _mass(measure, region, atol):
    if isinstance(measure, EmpiricalMeasure):
        return float(measure.weights[region.contains(measure.points, atol=atol)].sum())
    return float(measure.mass(region))


# ---------------------------------------------------------------------------
# Wasserstein distances


def _wasserstein_1d(x, a, y, b, p):
    ox, oy = np.argsort(x, kind="stable"), np.argsort(y, kind="stable")
    xs, ws = x[ox], a[ox].astype(float)
    ys, vs = y[oy], b[oy].astype(float)
    total = 0.0
    i = j = 0
    ra, rb = ws[0], vs[0]
    while i < len(xs) and j < len(ys):
        f = min(ra, rb)
        total += f * abs(xs[i] - ys[j]) ** p
        ra -= f
        rb -= f
        if ra <= 0:
            i += 1
            if i < len(xs):
                ra = ws[i]
        if rb <= 0:
            j += 1
            if j < len(ys):
                rb = vs[j]
    return total


def wasserstein_p(mu, nu, metric=Metric.EUCLIDEAN, p=1.0, cap=WASSERSTEIN_EXACT_CAP) -> float:
    """Exact ``W_p`` between two finite probability measures.

    One-dimensional inputs of any size use the monotone (sorted quantile)
    coupling. In higher dimension uniform equal-count inputs are solved as
    an assignment problem and everything else by the small transportation
    LP, both limited to ``cap`` atoms per side.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    metric = Metric.parse(metric)
    _validate_pair(mu, nu)
    if mu.dim == 1:
        val = _wasserstein_1d(mu.points[:, 0], mu.weights, nu.points[:, 0], nu.weights, p)
        return max(val, 0.0) ** (1.0 / p)
    if max(mu.size, nu.size) > cap:
        raise ValueError(f"exact W_p in dimension {mu.dim} is capped at {cap} atoms per side")
    C = pairwise_distances(metric, mu.points, nu.points) ** p
    if mu.size == nu.size and mu.is_uniform and nu.is_uniform:
        from scipy.optimize import linear_sum_assignment

        r, c = linear_sum_assignment(C)
        val = float(C[r, c].mean())
    else:
        from .oracles import small_transport_lp

        val = small_transport_lp(mu.weights, nu.weights, C, max_atoms=cap)
    return max(val, 0.0) ** (1.0 / p)


def wp_lower_bound(wp: float, eps: float, p: float = 1.0) -> float:
    """Risk lower bound ``max(0, (1 - (W_p / 2 eps)^p) / 2)`` from Markov's inequality."""
    if not eps > 0:
        raise ValueError("the W_p bound needs eps > 0")
    if p < 1:
        raise ValueError("p must be >= 1")
    return max(0.0, 0.5 * (1.0 - (wp / (2.0 * eps)) ** p))
