"""Closed-form threshold transport costs for parametric binary problems.

Every solver returns an :class:`AnalyticSolution` holding the transport
cost ``D_eps``, the optimal robust risk ``(1 - D_eps) / 2`` and an
optimal classifier region. The region decides the class named by
``AnalyticSolution.positive``; ``solution.problem`` arranges the two laws
so that :func:`otrisk.intervals.classifier_risk` and
:func:`otrisk.discrete.strassen_gap` can be applied directly.

The univariate solvers pick boundaries among the stationary points of the
dual objective ``mu(A^-eps) - nu(A^eps)`` (the intersections of
``eps``-shifted densities) together with one-sided options, then evaluate
the objective exactly through cdfs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .intervals import INF, Halfspace, IntervalSet
from .measures import BinaryProblem, Gaussian, IsoGaussian, Metric, Triangular, Uniform, q_tail

CLAMP_WARN = 1e-9
QUANTILE_GRID = 10001


@dataclass(frozen=True)
class AnalyticSolution:
    """Optimal transport cost, robust risk and classifier of a binary problem.

    Attributes
    ----------
    depsilon : float
        Threshold transport cost, clamped to ``[0, 1]``.
    risk : float
        Optimal robust 0-1 risk ``(1 - depsilon) / 2``.
    classifier : IntervalSet or Halfspace
        Region on which ``laws[positive]`` is decided. Empty when degenerate.
    laws : tuple
        The two class laws in the caller's argument order.
    positive : int
        Index into ``laws`` of the class decided on ``classifier``.
    boundaries : dict
        Named boundary points (``m``, ``b_l``, ``b_r``, ``l``, ``r``, ...).
    degenerate : bool
        True when a constant classifier is optimal (risk one half).
    diagnostics : dict
        Clamps, alternative readings and solver details.
    """

    depsilon: float
    risk: float
    classifier: object
    laws: tuple
    positive: int
    boundaries: dict = field(default_factory=dict)
    degenerate: bool = False
    diagnostics: dict = field(default_factory=dict)

    @property
    def problem(self) -> BinaryProblem:
        """Binary problem whose ``class1`` is the class decided on ``classifier``."""
        other = self.laws[1 - self.positive]
        return BinaryProblem(class0=other, class1=self.laws[self.positive])


def _solution(raw, classifier, laws, positive, boundaries=None, diagnostics=None, force_degenerate=False):
    diagnostics = dict(diagnostics or {})
    diagnostics["raw_depsilon"] = raw
    d = min(max(raw, 0.0), 1.0)
    if d != raw:
        diagnostics["clamp"] = raw - d
        if abs(raw - d) > CLAMP_WARN:
            diagnostics["clamp_warning"] = True
    degenerate = force_degenerate or d <= 0.0
    if degenerate:
        d = 0.0
        classifier = IntervalSet.empty() if not isinstance(classifier, Halfspace) else _empty_halfspace(classifier.dim)
    return AnalyticSolution(
        depsilon=d,
        risk=0.5 * (1.0 - d),
        classifier=classifier,
        laws=tuple(laws),
        positive=positive,
        boundaries=dict(boundaries or {}),
        degenerate=degenerate,
        diagnostics=diagnostics,
    )


def _empty_halfspace(dim):
    return Halfspace((0.0,) * dim, 1.0)


def _check_eps(eps):
    if not (eps >= 0 and math.isfinite(eps)):
        raise ValueError(f"eps must be a finite nonnegative number, got {eps}")


# ---------------------------------------------------------------------------
# equal variances


def gaussian_equal_var(mu0: float, mu1: float, sigma: float, eps: float) -> AnalyticSolution:
    """Two Gaussians with a common variance on the line.

    The optimal classifier thresholds at the midpoint of the means and
    decides the larger-mean class to its right; the risk is
    ``Q((|mu1 - mu0| / 2 - eps) / sigma)`` until ``eps`` reaches half the
    mean gap, after which a constant classifier is optimal.

    Examples
    --------
    >>> round(gaussian_equal_var(0.0, 2.0, 1.0, 0.5).risk, 6)
    0.308538
    """
    _check_eps(eps)
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    laws = (Gaussian(mu0, sigma), Gaussian(mu1, sigma))
    half_gap = abs(mu1 - mu0) / 2.0
    mid = 0.5 * (mu0 + mu1)
    positive = 1 if mu1 >= mu0 else 0
    bounds = {"midpoint": mid}
    if eps >= half_gap:
        return _solution(0.0, IntervalSet.empty(), laws, positive, bounds, force_degenerate=True)
    raw = 1.0 - 2.0 * q_tail((half_gap - eps) / sigma)
    return _solution(raw, IntervalSet([(mid, INF)]), laws, positive, bounds)


def gaussian_iso_ddim(p0: IsoGaussian, p1: IsoGaussian, eps: float, metric=Metric.EUCLIDEAN) -> AnalyticSolution:
    """Isotropic Gaussians with a common scale under the Euclidean adversary.

    Reduces to :func:`gaussian_equal_var` along the mean-difference axis;
    the classifier is the perpendicular bisector halfspace pointing at
    ``p1``.
    """
    _check_eps(eps)
    if Metric.parse(metric) is not Metric.EUCLIDEAN:
        raise ValueError("the closed form holds for the euclidean adversary only")
    if p0.dim != p1.dim:
        raise ValueError("dimension mismatch")
    if p0.sigma != p1.sigma:
        raise ValueError("isotropic Gaussians must share sigma; use gaussian_general in one dimension")
    w = p1.mean - p0.mean
    delta = float(np.linalg.norm(w))
    mid = 0.5 * (p0.mean + p1.mean)
    laws = (p0, p1)
    bounds = {"delta": delta}
    if eps >= delta / 2.0:
        return _solution(0.0, _empty_halfspace(p0.dim), laws, 1, bounds, force_degenerate=True)
    raw = 1.0 - 2.0 * q_tail((delta / 2.0 - eps) / p0.sigma)
    return _solution(raw, Halfspace(tuple(w), float(w @ mid)), laws, 1, bounds)


# ---------------------------------------------------------------------------
# Gaussian intersections


@dataclass(frozen=True)
class IntersectionRoots:
    """Crossing points of two Gaussian densities, sorted ascending.

    ``roots`` holds zero (identical laws), one (equal variances) or two
    points.
    """

    roots: tuple

    @property
    def count(self) -> int:
        return len(self.roots)

    @property
    def s1(self) -> Optional[float]:
        return self.roots[0] if self.roots else None

    @property
    def s2(self) -> Optional[float]:
        return self.roots[-1] if self.roots else None


def gaussian_intersections(g1: Gaussian, g2: Gaussian) -> IntersectionRoots:
    """Solve ``pdf_1(x) = pdf_2(x)`` in closed form.

    After the affine change ``y = (x - mu_1) / sigma_1`` the second law
    becomes ``N(m, s^2)`` and the crossings solve
    ``y^2 (s^2 - 1) + 2 m y - (m^2 + 2 s^2 log s) = 0``. The quadratic is
    solved with the cancellation-free form of the root formula.
    """
    m = (g2.mu - g1.mu) / g1.sigma
    s = g2.sigma / g1.sigma
    a = s * s - 1.0
    b = 2.0 * m
    c = -(m * m + 2.0 * s * s * math.log(s))
    if a == 0.0:
        if m == 0.0:
            return IntersectionRoots(())
        ys = [-c / b]
    else:
        # discriminant / 4 = s^2 (m^2 + 2 (s^2 - 1) log s) >= 0
        disc = s * s * (m * m + 2.0 * a * math.log(s))
        sq = math.sqrt(max(disc, 0.0))
        half_b = 0.5 * b
        q = -(half_b + math.copysign(sq, half_b if half_b != 0 else 1.0))
        ys = [q / a, c / q] if q != 0.0 else [0.0, 0.0]
        ys = sorted(ys)
    xs = tuple(g1.mu + g1.sigma * y for y in ys)
    return IntersectionRoots(tuple(_polish_root(g1, g2, x) for x in xs))


def _polish_root(g1, g2, x):
    # one Newton step on the log-density difference removes residual rounding
    def h(t):
        return (-0.5 * ((t - g1.mu) / g1.sigma) ** 2 - math.log(g1.sigma)) - (
            -0.5 * ((t - g2.mu) / g2.sigma) ** 2 - math.log(g2.sigma))

    def dh(t):
        return -(t - g1.mu) / g1.sigma ** 2 + (t - g2.mu) / g2.sigma ** 2

    d = dh(x)
    if d == 0.0 or not math.isfinite(d):
        return x
    x_new = x - h(x) / d
    return x_new if abs(h(x_new)) <= abs(h(x)) else x


def _shifted(g: Gaussian, by: float) -> Gaussian:
    """Law of ``X + by``; its density is ``pdf(x - by)``."""
    return Gaussian(g.mu + by, g.sigma)


# ---------------------------------------------------------------------------
# unequal variances


def _cotail_gap(f: Gaussian, g: Gaussian, eps, b_l, b_r):
    """``mu(A^-eps) - nu(A^eps)`` for ``A = (-inf, b_l] U [b_r, inf)``; either piece may be absent."""
    inner = 0.0
    outer = 0.0
    if b_l is not None and b_r is not None and b_r - b_l <= 2 * eps:
        return None  # A^eps covers the line
    if b_l is not None:
        inner += float(f.cdf(b_l - eps))
        outer += float(g.cdf(b_l + eps))
    if b_r is not None:
        inner += float(f.sf(b_r + eps))
        outer += float(g.sf(b_r - eps))
    return inner - outer


def _co_interval(b_l, b_r) -> IntervalSet:
    parts = []
    if b_l is not None:
        parts.append((-INF, b_l))
    if b_r is not None:
        parts.append((b_r, INF))
    return IntervalSet(parts)


def gaussian_same_mean(sigma1: float, sigma2: float, eps: float, mean: float = 0.0) -> AnalyticSolution:
    """Gaussians sharing a mean, ``sigma1 > sigma2``.

    The boundary ``m`` is the right crossing of ``f(x + eps)`` and
    ``g(x - eps)``; the wider class is decided on ``|x - mean| >= m`` and
    ``D_eps = 2 Q((m + eps) / sigma1) - 2 Q((m - eps) / sigma2)``.
    """
    _check_eps(eps)
    if not sigma1 > sigma2 > 0:
        raise ValueError("need sigma1 > sigma2 > 0")
    f, g = Gaussian(mean, sigma1), Gaussian(mean, sigma2)
    laws = (f, g)
    m = gaussian_intersections(_shifted(f, -eps), _shifted(g, eps)).s2 - mean
    bounds = {"m": m}
    if m <= eps:
        return _solution(0.0, IntervalSet.empty(), laws, 0, bounds, force_degenerate=True)
    raw = 2.0 * q_tail((m + eps) / sigma1) - 2.0 * q_tail((m - eps) / sigma2)
    A = IntervalSet([(-INF, mean - m), (mean + m, INF)])
    return _solution(raw, A, laws, 0, bounds)


def gaussian_general(mu1: float, sigma1: float, mu2: float, sigma2: float, eps: float) -> AnalyticSolution:
    """Arbitrary pair of univariate Gaussians.

    With the wider law ``f`` and the narrower ``g``, the left boundary
    solves ``f(b_l - eps) = g(b_l + eps)`` and the right one
    ``f(b_r + eps) = g(b_r - eps)``; the wider class is decided on
    ``(-inf, b_l] U [b_r, inf)``. Both crossings of each equation and the
    one-sided sets are scored and the best admissible pair wins, which
    also covers configurations where one tail alone is optimal.
    Equal variances route to :func:`gaussian_equal_var`.
    """
    _check_eps(eps)
    if not (sigma1 > 0 and sigma2 > 0):
        raise ValueError("sigmas must be positive")
    if sigma1 == sigma2:
        return gaussian_equal_var(mu1, mu2, sigma1, eps)
    laws = (Gaussian(mu1, sigma1), Gaussian(mu2, sigma2))
    wide = 0 if sigma1 > sigma2 else 1
    f, g = laws[wide], laws[1 - wide]

    left = gaussian_intersections(_shifted(f, eps), _shifted(g, -eps)).roots
    right = gaussian_intersections(_shifted(f, -eps), _shifted(g, eps)).roots
    fixed = (left[0], right[-1])
    best, best_pair = 0.0, (None, None)
    for b_l, b_r in itertools.product((None,) + left, (None,) + right):
        val = _cotail_gap(f, g, eps, b_l, b_r)
        if val is not None and val > best:
            best, best_pair = val, (b_l, b_r)
    diagnostics = {"fixed_root_boundaries": fixed,
                   "fixed_root_depsilon": _cotail_gap(f, g, eps, *fixed)}
    b_l, b_r = best_pair
    bounds = {"b_l": b_l, "b_r": b_r}
    return _solution(best, _co_interval(b_l, b_r), laws, wide, bounds, diagnostics)


# ---------------------------------------------------------------------------
# uniform pair


def uniform_pair(I, J, eps: float) -> AnalyticSolution:
    """Uniform laws on closed intervals ``I`` and ``J``.

    With ``I`` the shorter interval, ``D_eps = max(0, 1 - nu(I^{2 eps}))``
    and the class on ``I`` is decided on ``I^eps``. Diagnostics carry both
    ``nu(I^{2 eps})`` and its half, the two readings of the risk formula.
    """
    _check_eps(eps)
    laws = (_as_uniform(I), _as_uniform(J))
    narrow = 0 if laws[0].width <= laws[1].width else 1
    mu, nu = laws[narrow], laws[1 - narrow]
    nu_mass = nu.mass_of(mu.a - 2 * eps, mu.b + 2 * eps)
    diagnostics = {"nu_I_2eps": nu_mass, "half_nu_I_2eps": 0.5 * nu_mass}
    A = IntervalSet([(mu.a - eps, mu.b + eps)])
    return _solution(1.0 - nu_mass, A, laws, narrow, {"l": mu.a - eps, "r": mu.b + eps}, diagnostics)


def _as_uniform(x) -> Uniform:
    if isinstance(x, Uniform):
        return x
    a, b = x
    if not a < b:
        raise ValueError(f"degenerate interval [{a}, {b}]")
    return Uniform(float(a), float(b))


# ---------------------------------------------------------------------------
# triangular pair

_TIE = 1e-13


def _pl_crossings(p: Callable, q: Callable, knots, lo, hi):
    """Zeros of ``p - q`` for piecewise-linear ``p``, ``q`` with the given kinks."""
    pts = sorted({k for k in knots if lo < k < hi} | {lo, hi})
    out = []
    for a, b in zip(pts[:-1], pts[1:]):
        da, db = p(a) - q(a), p(b) - q(b)
        if da == 0.0:
            out.append(a)
        if da * db < 0.0:
            out.append(a + (b - a) * da / (da - db))
    return out


def triangular_pair(t1: Triangular, t2: Triangular, eps: float) -> AnalyticSolution:
    """Symmetric triangular laws, the narrower one decided on ``[l, r]``.

    The dual objective splits into a left part depending on ``l`` and a
    right part depending on ``r``, each piecewise quadratic between the
    kinks of the shifted densities. Candidates are the kinks, the zeros of
    ``f(l + eps) - g(l - eps)`` and ``f(r - eps) - g(r + eps)``, and the
    one-sided limits; among optimal pairs with ``r - l > 2 eps`` the largest
    ``l`` and then the smallest ``r`` is kept. Equal widths keep the first
    law as the decided class.
    """
    _check_eps(eps)
    laws = (t1, t2)
    narrow = 0 if t1.halfwidth <= t2.halfwidth else 1
    f, g = laws[narrow], laws[1 - narrow]
    knots_f = [k for k in f.breakpoints()]
    knots_g = [k for k in g.breakpoints()]
    lo = min(knots_f[0], knots_g[0]) - 4 * eps - 1.0
    hi = max(knots_f[-1], knots_g[-1]) + 4 * eps + 1.0

    # l: stationary where f(l + eps) = g(l - eps)
    fl = lambda x: float(f.pdf(x + eps))
    gl = lambda x: float(g.pdf(x - eps))
    kl = [k - eps for k in knots_f] + [k + eps for k in knots_g]
    # r: stationary where f(r - eps) = g(r + eps)
    fr = lambda x: float(f.pdf(x - eps))
    gr = lambda x: float(g.pdf(x + eps))
    kr = [k + eps for k in knots_f] + [k - eps for k in knots_g]

    ls = sorted(set(kl) | set(_pl_crossings(fl, gl, kl, lo, hi)))
    rs = sorted(set(kr) | set(_pl_crossings(fr, gr, kr, lo, hi)))

    def h_l(x):
        return 0.0 if x == -INF else float(g.cdf(x - eps)) - float(f.cdf(x + eps))

    def h_r(x):
        return 0.0 if x == INF else float(f.cdf(x - eps)) - float(g.cdf(x + eps))

    left = [(-INF, 0.0)] + [(x, h_l(x)) for x in ls]
    right = [(INF, 0.0)] + [(x, h_r(x)) for x in rs]
    best, best_pair = 0.0, None
    for (l, vl), (r, vr) in itertools.product(left, right):
        if not r - l > 2 * eps:
            continue
        val = vl + vr
        if best_pair is None or val > best + _TIE or (
                abs(val - best) <= _TIE and (l, -r) > (best_pair[0], -best_pair[1])):
            if val > 0.0:
                best, best_pair = val, (l, r)
    if best_pair is None:
        return _solution(0.0, IntervalSet.empty(), laws, narrow, {}, force_degenerate=True)
    l, r = best_pair
    raw = _interval_gap(f, g, eps, l, r)
    return _solution(raw, IntervalSet([(l, r)]), laws, narrow, {"l": l, "r": r})


def _interval_gap(f, g, eps, l, r):
    return f.mass_of(l + eps, r - eps) - g.mass_of(l - eps, r + eps)


# ---------------------------------------------------------------------------
# zero-cost criteria


def quantile_sup_distance(F, G, grid_n: int = QUANTILE_GRID) -> float:
    """Largest quantile gap ``|F^-1(t) - G^-1(t)|`` on ``t = k / (n + 1)``.

    A grid approximation of the infinity-Wasserstein distance that
    approaches it from below as ``grid_n`` grows.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    t = np.arange(1, grid_n + 1) / (grid_n + 1.0)
    return float(np.max(np.abs(np.asarray(F.quantile(t)) - np.asarray(G.quantile(t)))))


def cdf_dominance(F, G, eps: float, grid_n: int = QUANTILE_GRID, tol: float = 1e-12) -> dict:
    """The two cdf conditions ``F(x) >= G(x)`` and ``F(x) <= G(x + 2 eps)`` on an x-grid.

    Both holding is sufficient for a zero transport cost.
    """
    lo = min(float(F.quantile(1e-8)), float(G.quantile(1e-8))) - 2 * eps
    hi = max(float(F.quantile(1 - 1e-8)), float(G.quantile(1 - 1e-8))) + 2 * eps
    x = np.linspace(lo, hi, grid_n)
    Fx, Gx, Gs = (np.asarray(v, dtype=float) for v in (F.cdf(x), G.cdf(x), G.cdf(x + 2 * eps)))
    return {"lower": bool(np.all(Fx >= Gx - tol)), "upper": bool(np.all(Fx <= Gs + tol))}


def zero_cost_check(F, G, eps: float, grid_n: int = QUANTILE_GRID, tol: float = 1e-9) -> bool:
    """Whether the transport cost vanishes: the quantile gap stays within ``2 eps``."""
    _check_eps(eps)
    return quantile_sup_distance(F, G, grid_n) <= 2 * eps + tol * max(1.0, 2 * eps)


# ---------------------------------------------------------------------------
# lemma hypotheses


@dataclass(frozen=True)
class Restriction:
    """A density restricted to the closed interval ``[lo, hi]`` (ends may be infinite)."""

    pdf: Callable
    lo: float
    hi: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.lo) & (x <= self.hi), self.pdf(x), 0.0)

    def mass(self) -> float:
        from scipy.integrate import quad

        return float(quad(lambda t: float(self.pdf(t)), self.lo, self.hi, limit=200)[0])

    def shifted(self, by: float) -> "Restriction":
        """Translate right by ``by``; support bounds move exactly with it."""
        pdf = self.pdf
        return Restriction(lambda x: pdf(np.asarray(x) - by), self.lo + by, self.hi + by)

    def mirrored(self) -> "Restriction":
        pdf = self.pdf
        return Restriction(lambda x: pdf(-np.asarray(x)), -self.hi, -self.lo)


def _close(a, b, scale=1.0):
    return a == b or abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b), scale)


def _grid(lo, hi, extent, n):
    lo = lo if math.isfinite(lo) else hi - extent
    hi = hi if math.isfinite(hi) else lo + extent
    return np.linspace(lo, hi, n)


def check_shift_condition(f: Restriction, g: Restriction, eps: float,
                          grid_n: int = QUANTILE_GRID, extent: float = 40.0) -> bool:
    """Hypotheses of the translation lemma for a pair of tail restrictions.

    Right tails: ``g`` lives on ``[a, inf)``, ``f`` on ``[a + 2 eps, inf)``
    and ``g(x) <= f(x + 2 eps)``. Left tails are the mirror image. Checked on
    a grid of ``grid_n`` points spanning ``extent`` beyond finite ends.
    """
    _check_eps(eps)
    if f.hi == INF and g.hi == INF and math.isfinite(g.lo):
        if not _close(f.lo, g.lo + 2 * eps, eps):
            return False
        x = _grid(f.lo, INF, extent, grid_n)
        gx, fx = g.shifted(2 * eps)(x), f(x)
    elif f.lo == -INF and g.lo == -INF and math.isfinite(g.hi):
        return check_shift_condition(f.mirrored(), g.mirrored(), eps, grid_n, extent)
    else:
        return False
    tol = 1e-9 * max(float(np.max(gx)), float(np.max(fx)), 1e-300)
    return bool(np.all(gx <= fx + tol))


def _single_crossing(h, tol, first_positive=True):
    """``h >= 0`` then ``h <= 0`` along the grid (signs flipped when ``first_positive`` is false)."""
    s = h if first_positive else -h
    neg = np.nonzero(s < -tol)[0]
    if neg.size == 0:
        return True
    return bool(np.all(s[neg[0]:] <= tol))


def check_scrunch_condition(f: Restriction, g: Restriction, eps: float,
                            grid_n: int = QUANTILE_GRID, mass_tol: float = 1e-6) -> bool:
    """Hypotheses of the compression lemma.

    ``f`` lives on ``[a, b]`` and ``g`` on ``[a + 2 eps, b]`` with
    ``b - a > 2 eps`` and equal masses; ``f - g`` changes sign once from
    nonnegative to nonpositive, and ``f - g(. + 2 eps)`` once from
    nonpositive to nonnegative on ``[a, b - 2 eps]``. The mirror
    configuration (``g`` on ``[b, c]``, ``f`` on ``[b, c + 2 eps]``) is
    reflected onto this one.
    """
    _check_eps(eps)
    if not all(math.isfinite(v) for v in (f.lo, f.hi, g.lo, g.hi)):
        return False
    if _close(f.hi, g.hi) and _close(g.lo, f.lo + 2 * eps, eps):
        pass
    elif _close(f.lo, g.lo) and _close(f.hi, g.hi + 2 * eps, eps):
        return check_scrunch_condition(f.mirrored(), g.mirrored(), eps, grid_n, mass_tol)
    else:
        return False
    a, b = f.lo, f.hi
    if not b - a > 2 * eps:
        return False
    x = np.linspace(a, b, grid_n)
    fx, gx = f(x), g(x)
    mf, mg = f.mass(), g.mass()
    if abs(mf - mg) > mass_tol * max(mf, mg, 1e-300):
        return False
    tol = 1e-9 * max(float(np.max(fx)), float(np.max(gx)), 1e-300)
    if not _single_crossing(fx - gx, tol, first_positive=True):
        return False
    xs = x[x <= b - 2 * eps]
    return _single_crossing(f(xs) - g.shifted(-2 * eps)(xs), tol, first_positive=False)


# ---------------------------------------------------------------------------
# motivating example


def motivating_example(sigma0: float, sigma1: float, eps: float):
    """Boundary and robust risk for ``N(0, sigma0^2)`` versus ``N(0, sigma1^2)``.

    The boundary is ``w = sqrt(w0^2 + eps^2 (k^2 - 1)) + eps k`` with
    ``k = (sigma0^2 + sigma1^2) / (sigma0^2 - sigma1^2)`` and ``w0`` the
    positive crossing of the two densities. The narrow class is decided on
    ``[-w, w]``.

    Returns
    -------
    w : float
    risk : float
    """
    _check_eps(eps)
    if not sigma0 > sigma1 > 0:
        raise ValueError("need sigma0 > sigma1 > 0")
    s0, s1 = sigma0 ** 2, sigma1 ** 2
    w0_sq = 2.0 * s0 * s1 * math.log(sigma0 / sigma1) / (s0 - s1)
    k = (s0 + s1) / (s0 - s1)
    w = math.sqrt(w0_sq + eps * eps * (k * k - 1.0)) + eps * k
    if w <= eps:
        return w, 0.5
    # narrow class errs when pushed past w, wide class when pulled inside
    risk = 0.5 * (2.0 * q_tail((w - eps) / sigma1) + 1.0 - 2.0 * q_tail((w + eps) / sigma0))
    return w, min(risk, 0.5)
