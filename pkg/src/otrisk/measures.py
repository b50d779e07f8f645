"""Measure and distribution types shared by every solver.

Everything here is an immutable value: arrays handed to an
:class:`EmpiricalMeasure` are copied and flagged read-only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import erfc, ndtri

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

#: Tolerance used when deciding whether a measure has unit total mass.
PROBABILITY_TOL = 1e-9


class Metric(str, enum.Enum):
    """Ground metric on the input space."""

    EUCLIDEAN = "euclidean"
    CHEBYSHEV = "chebyshev"

    @classmethod
    def parse(cls, value: Union[str, "Metric"]) -> "Metric":
        if isinstance(value, Metric):
            return value
        key = str(value).strip().lower()
        aliases = {"l2": cls.EUCLIDEAN, "2": cls.EUCLIDEAN, "linf": cls.CHEBYSHEV,
                   "inf": cls.CHEBYSHEV, "max": cls.CHEBYSHEV}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown metric {value!r}; expected 'euclidean' or 'chebyshev'") from None

    def dual_norm(self, w) -> float:
        """Norm dual to this metric's norm (l2 -> l2, l-inf -> l1)."""
        w = np.asarray(w, dtype=float)
        if self is Metric.EUCLIDEAN:
            return float(np.linalg.norm(w))
        return float(np.abs(w).sum())


def distance(metric, x, y) -> float:
    """Distance between two points under ``metric``.

    >>> distance("euclidean", (0, 0), (3, 4))
    5.0
    >>> distance("chebyshev", (0, 0), (3, 4))
    4.0
    """
    metric = Metric.parse(metric)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    diff = np.abs(x - y)
    if diff.size == 1:
        return float(diff[0])
    if metric is Metric.EUCLIDEAN:
        return float(np.sqrt(np.dot(diff, diff)))
    return float(diff.max())


def pairwise_distances(metric, X, Y) -> np.ndarray:
    """Matrix of distances between the rows of ``X`` and the rows of ``Y``.

    In one dimension both metrics reduce to ``|x - y|`` and that exact
    expression is used, so threshold comparisons agree bit-for-bit with
    the sorted-sample code paths.
    """
    metric = Metric.parse(metric)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if Y.ndim == 1:
        Y = Y[:, None]
    if X.shape[1] != Y.shape[1]:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    if X.shape[1] == 1:
        return np.abs(X[:, 0][:, None] - Y[:, 0][None, :])
    return cdist(X, Y, metric=metric.value)


def q_tail(x):
    """Standard normal tail probability ``Q(x) = 1 - Phi(x)``.

    Evaluated through ``erfc`` so that far tails keep full relative
    precision. Accepts scalars or arrays.
    """
    if np.ndim(x) == 0:
        return 0.5 * math.erfc(float(x) / _SQRT2)
    return 0.5 * erfc(np.asarray(x, dtype=float) / _SQRT2)


# ---------------------------------------------------------------------------
# univariate families


class _Univariate:
    """Shared helpers for the univariate families."""

    dim = 1

    def mass_of(self, lo: float, hi: float) -> float:
        """Probability of the closed interval ``[lo, hi]`` (0 when empty)."""
        if hi < lo:
            return 0.0
        return max(0.0, float(self.cdf(hi)) - float(self.cdf(lo)))

    def mass(self, region) -> float:
        """Probability of an :class:`~otrisk.intervals.IntervalSet`."""
        return float(sum(self.mass_of(lo, hi) for lo, hi in region.intervals))

    def _check_prob(self, t):
        t = np.asarray(t, dtype=float)
        if np.any((t < 0) | (t > 1)) or np.any(np.isnan(t)):
            raise ValueError("quantile argument must lie in [0, 1]")
        return t


@dataclass(frozen=True)
class Gaussian(_Univariate):
    mu: float
    sigma: float

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not math.isfinite(self.mu):
            raise ValueError("mu must be finite")

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        out = _INV_SQRT_2PI / self.sigma * np.exp(-0.5 * z * z)
        return float(out) if np.ndim(out) == 0 else out

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        out = q_tail(-z)
        return float(out) if np.ndim(out) == 0 else out

    def sf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        out = q_tail(z)
        return float(out) if np.ndim(out) == 0 else out

    def mass_of(self, lo, hi):
        if hi < lo:
            return 0.0
        # difference of tails on the right half keeps precision far from the mean
        if lo > self.mu:
            return max(0.0, self.sf(lo) - self.sf(hi))
        return max(0.0, self.cdf(hi) - self.cdf(lo))

    def quantile(self, t):
        t = self._check_prob(t)
        out = self.mu + self.sigma * ndtri(t)
        return float(out) if np.ndim(out) == 0 else out

    def support(self):
        return (-math.inf, math.inf)


@dataclass(frozen=True)
class Uniform(_Univariate):
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ValueError(f"uniform needs finite a < b, got [{self.a}, {self.b}]")

    @property
    def width(self) -> float:
        return self.b - self.a

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where((x >= self.a) & (x <= self.b), 1.0 / self.width, 0.0)
        return float(out) if out.ndim == 0 else out

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.clip((x - self.a) / self.width, 0.0, 1.0)
        return float(out) if out.ndim == 0 else out

    def quantile(self, t):
        t = self._check_prob(t)
        out = self.a + t * self.width
        return float(out) if np.ndim(out) == 0 else out

    def support(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class Triangular(_Univariate):
    """Symmetric triangular law on ``[center - halfwidth, center + halfwidth]``."""

    center: float
    halfwidth: float

    def __post_init__(self):
        if not (self.halfwidth > 0 and math.isfinite(self.halfwidth)):
            raise ValueError(f"halfwidth must be positive, got {self.halfwidth}")
        if not math.isfinite(self.center):
            raise ValueError("center must be finite")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        d = self.halfwidth
        out = np.maximum(d - np.abs(x - self.center), 0.0) / (d * d)
        return float(out) if out.ndim == 0 else out

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        d = self.halfwidth
        u = np.clip(x - (self.center - d), 0.0, 2 * d)
        left = u * u / (2 * d * d)
        v = 2 * d - u
        right = 1.0 - v * v / (2 * d * d)
        out = np.where(u <= d, left, right)
        return float(out) if out.ndim == 0 else out

    def quantile(self, t):
        t = self._check_prob(t)
        d = self.halfwidth
        lo = self.center - d + d * np.sqrt(2.0 * t)
        hi = self.center + d - d * np.sqrt(2.0 * (1.0 - t))
        out = np.where(t <= 0.5, lo, hi)
        return float(out) if out.ndim == 0 else out

    def support(self):
        return (self.center - self.halfwidth, self.center + self.halfwidth)

    def breakpoints(self):
        return (self.center - self.halfwidth, self.center, self.center + self.halfwidth)


UnivariateFamily = Union[Gaussian, Uniform, Triangular]


def family_eval(family):
    """Return the ``(pdf, cdf, quantile, mass_of)`` callables of a family."""
    return family.pdf, family.cdf, family.quantile, family.mass_of


@dataclass(frozen=True)
class IsoGaussian:
    """``N(mu, sigma^2 I_d)``."""

    mu: tuple
    sigma: float

    def __post_init__(self):
        mu = tuple(float(v) for v in np.atleast_1d(np.asarray(self.mu, dtype=float)))
        if len(mu) < 1:
            raise ValueError("IsoGaussian needs dim >= 1")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        object.__setattr__(self, "mu", mu)

    @property
    def dim(self) -> int:
        return len(self.mu)

    @property
    def mean(self) -> np.ndarray:
        return np.asarray(self.mu)

    def mass(self, region) -> float:
        """Probability of a :class:`~otrisk.intervals.Halfspace`."""
        from .intervals import Halfspace

        if not isinstance(region, Halfspace):
            raise TypeError("IsoGaussian masses are only available for halfspaces")
        return region.gaussian_mass(self.mean, self.sigma)


# ---------------------------------------------------------------------------
# empirical measures


class EmpiricalMeasure:
    """Weighted point cloud in ``dim`` dimensions.

    Weights are kept unnormalized; ``total_mass`` records their sum.
    """

    __slots__ = ("points", "weights", "total_mass")

    def __init__(self, points, weights=None):
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("empirical measure needs a non-empty (n, d) array of points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        n = pts.shape[0]
        if weights is None:
            w = np.full(n, 1.0 / n)
        else:
            w = np.array(weights, dtype=float).reshape(-1)
            if w.shape[0] != n:
                raise ValueError(f"{n} points but {w.shape[0]} weights")
            if np.any(w < 0) or not np.all(np.isfinite(w)):
                raise ValueError("weights must be finite and nonnegative")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "total_mass", float(w.sum()))

    def __setattr__(self, name, value):
        raise AttributeError("EmpiricalMeasure is immutable")

    def __reduce__(self):
        return (EmpiricalMeasure, (np.array(self.points), np.array(self.weights)))

    @classmethod
    def uniform(cls, points):
        return cls(points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"EmpiricalMeasure(n={self.size}, dim={self.dim}, mass={self.total_mass:.6g})"

    @property
    def is_probability(self) -> bool:
        return abs(self.total_mass - 1.0) <= PROBABILITY_TOL

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(self.weights == self.weights[0]))

    def mass(self, region) -> float:
        """Mass of an interval set (1-D) or halfspace (any dimension)."""
        return float(self.weights[region.contains(self.points)].sum())


def _dim_of(obj) -> int:
    return int(obj.dim)


@dataclass(frozen=True)
class BinaryProblem:
    """Two equally likely classes; ``class1`` is the one decided on a region ``A``."""

    class0: object
    class1: object

    def __post_init__(self):
        if _dim_of(self.class0) != _dim_of(self.class1):
            raise ValueError("both classes must share the same dimension")

    @property
    def dim(self) -> int:
        return _dim_of(self.class0)

    @property
    def is_univariate(self) -> bool:
        return all(isinstance(c, (Gaussian, Uniform, Triangular)) for c in (self.class0, self.class1))
