"""Certified lower bounds on the robust risk of Gaussian-smoothed datasets.

Each class is modeled as an equal-weight mixture of ``N(x_i, sigma^2 I)``
components centered on its samples. Pairing the components of the two
classes one to one and coupling every pair optimally gives a transport
plan between the mixtures, hence an upper bound on their ``D_eps`` and a
lower bound on the optimal robust risk.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .discrete import depsilon_exact, risk_from_depsilon
from .measures import EmpiricalMeasure, Metric, pairwise_distances, q_tail

MODES = ("tight", "empirical")
_CHUNK_BYTES = 64 * 2 ** 20


@dataclass(frozen=True)
class MixtureSpec:
    """Equal-weight isotropic Gaussian mixture on the points of ``centers``.

    ``sigma = 0`` stands for the empirical measure itself.
    """

    centers: EmpiricalMeasure
    sigma: float

    def __post_init__(self):
        if not isinstance(self.centers, EmpiricalMeasure):
            object.__setattr__(self, "centers", EmpiricalMeasure(self.centers))
        if not self.sigma >= 0:
            raise ValueError("sigma must be nonnegative")
        if not self.centers.is_uniform:
            raise ValueError("mixture centers must carry equal weights")

    @property
    def dim(self) -> int:
        return self.centers.dim

    @property
    def size(self) -> int:
        return self.centers.size


@dataclass(frozen=True)
class MixtureBoundReport:
    """Outcome of :func:`mixture_risk_lb`.

    ``matching[i]`` is the class-1 component paired with class-0 component
    ``i`` and ``per_pair_costs[i]`` that pair's transport cost.
    """

    eps: float
    sigma: float
    risk_lb: float
    matching: tuple
    per_pair_costs: np.ndarray
    matching_mode: str
    metric: Metric
    diagnostics: dict = field(default_factory=dict)

    @property
    def depsilon_ub(self) -> float:
        return 1.0 - 2.0 * self.risk_lb


def _residual_norms(delta, eps, metric):
    """Euclidean length of what remains of ``delta`` after the best shift of size ``2 eps``."""
    if metric is Metric.EUCLIDEAN:
        return np.maximum(np.linalg.norm(delta, axis=-1) - 2.0 * eps, 0.0)
    excess = np.maximum(np.abs(delta) - 2.0 * eps, 0.0)
    return np.linalg.norm(excess, axis=-1)


def _cost_from_residual(res, sigma):
    with np.errstate(over="ignore"):  # tiny sigma: ratio -> inf, cost -> 1
        z = res / (2.0 * sigma)
    return np.maximum(0.0, 1.0 - 2.0 * q_tail(z))


def pair_cost(delta, sigma: float, eps: float, metric=Metric.EUCLIDEAN):
    """Transport cost between ``N(0, sigma^2 I)`` and ``N(delta, sigma^2 I)``.

    The shift ``s`` with ``||s||_metric <= 2 eps`` closest to ``delta`` in
    the Euclidean norm moves the overlap for free; the rest costs
    ``1 - 2 Q(||delta - s||_2 / (2 sigma))``. Exact for the Euclidean
    adversary and an upper bound for the Chebyshev one.

    Parameters
    ----------
    delta : array_like, shape (d,) or (k, d)
        Mean offsets; rows are evaluated independently.
    sigma : float
        Positive component scale.
    eps : float
        Adversarial budget.
    metric : Metric or str

    Returns
    -------
    float or ndarray
    """
    if not sigma > 0:
        raise ValueError("pair_cost needs sigma > 0; sigma = 0 is the indicator cost")
    if not eps >= 0:
        raise ValueError("eps must be nonnegative")
    delta = np.asarray(delta, dtype=float)
    out = _cost_from_residual(_residual_norms(delta, eps, Metric.parse(metric)), sigma)
    return float(out) if out.ndim == 0 else out


def pair_cost_matrix(X, Y, sigma, eps, metric=Metric.EUCLIDEAN) -> np.ndarray:
    """``pair_cost(y_j - x_i)`` for all pairs, computed in row blocks."""
    metric = Metric.parse(metric)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if metric is Metric.EUCLIDEAN or X.shape[1] == 1:
        res = np.maximum(pairwise_distances(Metric.EUCLIDEAN, X, Y) - 2.0 * eps, 0.0)
        return _cost_from_residual(res, sigma)
    out = np.empty((len(X), len(Y)))
    step = max(1, _CHUNK_BYTES // (8 * max(1, Y.size)))
    for s in range(0, len(X), step):
        d = Y[None, :, :] - X[s:s + step, None, :]
        out[s:s + step] = _cost_from_residual(_residual_norms(d, eps, metric), sigma)
    return out


def _rowwise_distance(metric, X, Y):
    diff = np.abs(X - Y)
    return diff.max(axis=1) if metric is Metric.CHEBYSHEV else np.linalg.norm(diff, axis=1)


def _check_square(mu, nu):
    if mu.size != nu.size:
        raise ValueError(f"equal counts required, got {mu.size} and {nu.size}; subsample first")
    if not (mu.is_uniform and nu.is_uniform):
        raise ValueError("uniform weights required")


def _perm_from_certificate(cert, n):
    perm = np.full(n, -1, dtype=np.int64)
    for i, j, _ in cert.coupling:
        perm[int(i)] = int(j)
    if np.any(perm < 0) or len(set(perm.tolist())) != n:
        raise RuntimeError("certificate coupling is not a permutation")
    return perm


def pair_matching(mu: EmpiricalMeasure, nu: EmpiricalMeasure, metric=Metric.EUCLIDEAN,
                  eps: float = 0.0, sigma: float = 0.0, mode: str = "tight") -> np.ndarray:
    """Pair every component of ``mu`` with one of ``nu``.

    ``empirical`` reuses the optimal coupling of the two sample sets at the
    same ``eps`` (unmatched points paired in index order); ``tight`` solves
    the assignment problem that minimizes the summed pair costs, which is
    the empirical coupling whenever ``sigma = 0``.

    Returns
    -------
    ndarray of int, shape (n,)
        ``perm[i]`` is the partner of ``mu`` point ``i``.
    """
    metric = Metric.parse(metric)
    _check_square(mu, nu)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == "empirical" or sigma == 0:
        cert = depsilon_exact(mu, nu, metric, eps, method="matching")
        return _perm_from_certificate(cert, mu.size)
    costs = pair_cost_matrix(mu.points, nu.points, sigma, eps, metric)
    rows, cols = linear_sum_assignment(costs)
    perm = np.empty(mu.size, dtype=np.int64)
    perm[rows] = cols
    return perm


def mixture_risk_lb(spec0: MixtureSpec, spec1: MixtureSpec, metric=Metric.EUCLIDEAN,
                    eps: float = 0.0, mode: str = "tight") -> MixtureBoundReport:
    """Lower bound on the optimal robust risk between two Gaussian mixtures.

    ``risk_lb = (1 - mean pair cost) / 2``. With ``sigma = 0`` the bound
    is the exact empirical risk and comes straight from the threshold
    transport solver.
    """
    metric = Metric.parse(metric)
    if spec0.sigma != spec1.sigma:
        raise ValueError("both mixtures must share sigma")
    if spec0.dim != spec1.dim:
        raise ValueError("dimension mismatch")
    mu, nu = spec0.centers, spec1.centers
    _check_square(mu, nu)
    sigma = spec0.sigma
    if sigma == 0:
        cert = depsilon_exact(mu, nu, metric, eps, method="matching")
        perm = _perm_from_certificate(cert, mu.size)
        costs = (_rowwise_distance(metric, mu.points, nu.points[perm]) > 2.0 * eps).astype(float)
        return MixtureBoundReport(eps=float(eps), sigma=0.0, risk_lb=risk_from_depsilon(cert.cost),
                                  matching=tuple(perm.tolist()), per_pair_costs=costs,
                                  matching_mode=mode, metric=metric,
                                  diagnostics={"route": "exact-empirical"})
    perm = pair_matching(mu, nu, metric, eps, sigma, mode)
    costs = np.atleast_1d(pair_cost(nu.points[perm] - mu.points, sigma, eps, metric))
    risk_lb = 0.5 * (1.0 - float(np.mean(costs)))
    return MixtureBoundReport(eps=float(eps), sigma=float(sigma), risk_lb=min(0.5, max(0.0, risk_lb)),
                              matching=tuple(perm.tolist()), per_pair_costs=costs,
                              matching_mode=mode, metric=metric)


def sigma_star(mu: EmpiricalMeasure, nu: EmpiricalMeasure, metric=Metric.EUCLIDEAN) -> float:
    """Half the mean distance between paired points of the two classes.

    Points are paired by the assignment minimizing the total distance.
    """
    metric = Metric.parse(metric)
    _check_square(mu, nu)
    D = pairwise_distances(metric, mu.points, nu.points)
    rows, cols = linear_sum_assignment(D)
    return 0.5 * float(D[rows, cols].mean())


def balance_counts(mu: EmpiricalMeasure, nu: EmpiricalMeasure, seed=0):
    """Subsample the larger sample set (without replacement) to the smaller count."""
    n = min(mu.size, nu.size)
    rng = np.random.default_rng(seed)

    def take(m):
        if m.size == n:
            return m
        idx = np.sort(rng.choice(m.size, size=n, replace=False))
        return EmpiricalMeasure(m.points[idx])

    return take(mu), take(nu)
