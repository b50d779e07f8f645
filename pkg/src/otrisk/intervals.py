"""Closed-set calculus: finite unions of closed intervals and halfspaces.

Both region types support the two operations the robust-risk identity
needs, the ``eps``-expansion ``A^eps`` (points within ``eps`` of ``A``)
and the ``eps``-thinning ``A^-eps`` (points whose closed ``eps``-ball lies
inside ``A``), plus complements and membership tests.

Interval endpoints may be any real numbers including ``+-inf``;
``fractions.Fraction`` endpoints work as well and keep every operation
exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .measures import Metric, q_tail

INF = math.inf
_ROUNDING = 8 * 2.0 ** -52


def _check_eps(eps):
    if not eps >= 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")


class IntervalSet:
    """Sorted union of disjoint closed intervals on the extended real line.

    Overlapping or touching intervals are merged on construction, so the
    gaps between stored intervals are strictly positive.
    """

    __slots__ = ("_intervals",)

    def __init__(self, intervals: Iterable[Tuple[float, float]] = ()):
        cleaned = []
        for lo, hi in intervals:
            if lo != lo or hi != hi:
                raise ValueError("interval endpoints must not be NaN")
            if lo > hi:
                raise ValueError(f"interval [{lo}, {hi}] has lo > hi")
            if lo == INF or hi == -INF:
                raise ValueError(f"interval [{lo}, {hi}] contains no real point")
            cleaned.append((lo, hi))
        cleaned.sort(key=lambda iv: (iv[0], iv[1]))
        merged = []
        for lo, hi in cleaned:
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        self._intervals = tuple(merged)

    # -- construction helpers -------------------------------------------------
    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def full(cls) -> "IntervalSet":
        return cls([(-INF, INF)])

    @classmethod
    def points(cls, xs) -> "IntervalSet":
        return cls((float(x), float(x)) for x in np.ravel(xs))

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        """Parse ``lo..hi`` atoms separated by commas, e.g. ``-inf..-1.2,0.7..inf``.

        The empty string, ``empty`` and ``{}`` denote the empty set.
        """
        text = text.strip()
        if text in ("", "empty", "{}", "∅"):
            return cls.empty()
        atoms = []
        for atom in text.split(","):
            atom = atom.strip()
            if ".." not in atom:
                raise ValueError(f"bad interval atom {atom!r}; expected lo..hi")
            lo, hi = atom.split("..", 1)
            atoms.append((_parse_endpoint(lo), _parse_endpoint(hi)))
        return cls(atoms)

    # -- basic protocol ----------------------------------------------------------
    @property
    def intervals(self) -> Tuple[Tuple[float, float], ...]:
        return self._intervals

    def __iter__(self):
        return iter(self._intervals)

    def __len__(self):
        return len(self._intervals)

    def __bool__(self):
        return bool(self._intervals)

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._intervals == other._intervals

    def __hash__(self):
        return hash(self._intervals)

    def __repr__(self):
        return f"IntervalSet({self.format()!r})"

    def format(self) -> str:
        if not self._intervals:
            return "empty"
        return ",".join(f"{_fmt_endpoint(lo)}..{_fmt_endpoint(hi)}" for lo, hi in self._intervals)

    @property
    def is_empty(self) -> bool:
        return not self._intervals

    @property
    def is_full(self) -> bool:
        return self._intervals == ((-INF, INF),)

    def lebesgue(self) -> float:
        return float(sum(hi - lo for lo, hi in self._intervals))

    def contains(self, x, atol: float = 0.0) -> np.ndarray:
        """Boolean membership for scalars, 1-D arrays or ``(n, 1)`` point arrays."""
        x = np.asarray(x, dtype=float)
        if x.ndim == 2:
            if x.shape[1] != 1:
                raise ValueError("interval sets live on the real line; got points of dim > 1")
            x = x[:, 0]
        out = np.zeros(x.shape, dtype=bool)
        for lo, hi in self._intervals:
            out |= (x >= float(lo) - atol) & (x <= float(hi) + atol)
        return out

    def issubset(self, other: "IntervalSet") -> bool:
        """Exact containment, decided on endpoints."""
        j = 0
        theirs = other.intervals
        for lo, hi in self._intervals:
            while j < len(theirs) and theirs[j][1] < lo:
                j += 1
            if j == len(theirs) or not (theirs[j][0] <= lo and hi <= theirs[j][1]):
                return False
        return True

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self._intervals + other.intervals)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a_lo, a_hi in self._intervals:
            for b_lo, b_hi in other.intervals:
                lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
                if lo <= hi:
                    out.append((lo, hi))
        return IntervalSet(out)

    # -- set calculus ----------------------------------------------------------
    def complement(self) -> "IntervalSet":
        """Closure of the complement; shared boundary points appear in both sets."""
        out = []
        left = -INF
        for lo, hi in self._intervals:
            if lo != -INF:
                out.append((left, lo))
            left = hi
        if left != INF:
            out.append((left, INF))
        return IntervalSet(out)

    def expand(self, eps) -> "IntervalSet":
        """``A^eps``: widen every interval by ``eps`` on both sides, then merge."""
        _check_eps(eps)
        if eps == 0:
            return self
        return IntervalSet((lo - eps, hi + eps) for lo, hi in self._intervals)

    def thin(self, eps) -> "IntervalSet":
        """``A^-eps``: the points whose closed ``eps``-ball lies inside the set.

        Equal to the complement of the expanded (open) complement; an
        interval shorter than ``2 * eps`` disappears and one of length
        exactly ``2 * eps`` shrinks to its midpoint.
        """
        _check_eps(eps)
        if eps == 0:
            return self
        out = []
        for lo, hi in self._intervals:
            nlo, nhi = lo + eps, hi - eps
            if nlo <= nhi:
                out.append((nlo, nhi))
            elif isinstance(nlo, float) and nlo - nhi <= _ROUNDING * max(1.0, abs(lo), abs(hi), eps):
                # length 2*eps up to float rounding: keep the midpoint
                mid = 0.5 * (nlo + nhi)
                out.append((mid, mid))
        return IntervalSet(out)


def _parse_endpoint(tok: str) -> float:
    tok = tok.strip().lower()
    if tok in ("-inf", "-infinity", "-∞"):
        return -INF
    if tok in ("inf", "+inf", "infinity", "∞", "+∞"):
        return INF
    try:
        return float(tok)
    except ValueError:
        raise ValueError(f"bad interval endpoint {tok!r}") from None


def _fmt_endpoint(x) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return repr(float(x))


def expand(A, eps, metric=Metric.EUCLIDEAN):
    """Expansion of an interval set or halfspace."""
    if isinstance(A, Halfspace):
        return A.expand(eps, metric)
    return A.expand(eps)


def thin(A, eps, metric=Metric.EUCLIDEAN):
    """Thinning of an interval set or halfspace."""
    if isinstance(A, Halfspace):
        return A.thin(eps, metric)
    return A.thin(eps)


def complement(A):
    return A.complement()


@dataclass(frozen=True)
class Halfspace:
    """Closed halfspace ``{x : <w, x> >= b}``.

    A zero normal encodes the whole space (``b <= 0``) or the empty set.
    """

    w: tuple
    b: float

    def __post_init__(self):
        w = tuple(float(v) for v in np.atleast_1d(np.asarray(self.w, dtype=float)))
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", float(self.b))

    @property
    def dim(self) -> int:
        return len(self.w)

    @property
    def normal(self) -> np.ndarray:
        return np.asarray(self.w)

    def contains(self, points, atol: float = 0.0) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None] if self.dim == 1 else pts[None, :]
        return pts @ self.normal >= self.b - atol

    def complement(self) -> "Halfspace":
        return Halfspace(tuple(-v for v in self.w), -self.b)

    def expand(self, eps, metric=Metric.EUCLIDEAN) -> "Halfspace":
        _check_eps(eps)
        return Halfspace(self.w, self.b - eps * Metric.parse(metric).dual_norm(self.w))

    def thin(self, eps, metric=Metric.EUCLIDEAN) -> "Halfspace":
        _check_eps(eps)
        return Halfspace(self.w, self.b + eps * Metric.parse(metric).dual_norm(self.w))

    def gaussian_mass(self, mean, sigma) -> float:
        """Probability of the halfspace under ``N(mean, sigma^2 I)``."""
        w = self.normal
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 1.0 if self.b <= 0 else 0.0
        return float(q_tail((self.b - float(w @ np.asarray(mean, dtype=float))) / (sigma * norm)))

    def format(self) -> str:
        coeffs = " ".join(repr(v) for v in self.w)
        return f"halfspace:w=[{coeffs}];b={self.b!r}"


def _mass(measure, region) -> float:
    return float(measure.mass(region))


def classifier_risk(problem, A, eps, metric=Metric.EUCLIDEAN) -> float:
    """Adversarial 0-1 risk of the classifier deciding ``class1`` on ``A``.

    Returns ``(p0(A^eps) + p1((A^c)^eps)) / 2``: a class-0 point is
    misclassified when it can be pushed into ``A``, a class-1 point when it
    can be pushed out of it.

    Parameters
    ----------
    problem : BinaryProblem
        Univariate families or 1-D empirical measures with an
        :class:`IntervalSet`; isotropic Gaussians or empirical measures of any
        dimension with a :class:`Halfspace`.
    A : IntervalSet or Halfspace
        Decide-1 region.
    eps : float
        Adversarial budget.
    """
    _check_eps(eps)
    if isinstance(A, IntervalSet):
        if problem.dim != 1:
            raise ValueError("interval classifiers need a univariate problem")
    elif isinstance(A, Halfspace):
        if A.dim != problem.dim:
            raise ValueError("halfspace dimension does not match the problem")
    else:
        raise TypeError(f"unsupported region type {type(A).__name__}")
    p0 = _mass(problem.class0, expand(A, eps, metric))
    p1 = _mass(problem.class1, expand(A.complement(), eps, metric))
    return 0.5 * (p0 + p1)
