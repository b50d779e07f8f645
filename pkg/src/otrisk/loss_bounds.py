"""Bound arithmetic for adversarial risk under continuous losses.

The evaluators take scalar summaries of a trained model (standard risk,
expected gradient dual norm, input-Lipschitz constant, curvature) and
return the first-order lower bound, the Lipschitz upper bound and the
square-root bound on how far the robust minimizer can drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy.optimize import minimize_scalar


@dataclass(frozen=True)
class LossBoundInputs:
    """Scalar summaries consumed by the loss bounds.

    Attributes
    ----------
    r0 : float
        Optimal standard risk.
    eps : float
        Adversarial budget.
    grad_dual_norm_exp : float, optional
        Infimum over parameters of the expected dual norm of the input gradient.
    lipschitz : float, optional
        Input-Lipschitz constant of the loss at the standard minimizer.
    hessian_min_eig : float, optional
        Smallest Hessian eigenvalue of the standard risk at its minimizer.
    """

    r0: float
    eps: float
    grad_dual_norm_exp: Optional[float] = None
    lipschitz: Optional[float] = None
    hessian_min_eig: Optional[float] = None

    def __post_init__(self):
        for name in ("r0", "eps", "grad_dual_norm_exp", "lipschitz"):
            v = getattr(self, name)
            if v is not None and not (v >= 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be a finite nonnegative number, got {v}")


def _need(inputs, name):
    v = getattr(inputs, name)
    if v is None:
        raise ValueError(f"{name} is required for this bound")
    return v


def convex_lower_bound(inputs: LossBoundInputs) -> float:
    """``r0 + eps * grad_dual_norm_exp``, valid for losses convex in the input."""
    return inputs.r0 + inputs.eps * _need(inputs, "grad_dual_norm_exp")


def lipschitz_upper_bound(inputs: LossBoundInputs) -> float:
    """``r0 + eps * lipschitz``; holds for both the data and distribution adversaries."""
    return inputs.r0 + inputs.eps * _need(inputs, "lipschitz")


def deviation_bound(inputs: LossBoundInputs):
    """``sqrt(eps * lipschitz / hessian_min_eig)`` bounding the minimizer shift.

    Returns
    -------
    bound : float
    small_eps_warning : bool
        Set when ``eps * lipschitz`` exceeds ``hessian_min_eig``, where the
        quadratic approximation behind the bound is not trusted.
    """
    lam = _need(inputs, "hessian_min_eig")
    if not lam > 0:
        raise ValueError("hessian_min_eig must be positive")
    lip = _need(inputs, "lipschitz")
    return math.sqrt(inputs.eps * lip / lam), inputs.eps * lip > lam


@dataclass(frozen=True)
class QuadraticToy:
    """Squared loss ``(x - w)^2 / 2`` with ``x`` Bernoulli(``p``) and a scalar ``w``.

    An adversary moving ``x`` by at most ``eps`` raises the loss to
    ``(|x - w| + eps)^2 / 2``, which keeps every quantity in closed form:
    the robust minimizer is ``p + eps (2p - 1)`` and the robust risk
    ``p (1 - p) (1 + 2 eps)^2 / 2``.
    """

    p: float = 0.25
    eps_max: float = 0.5

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ValueError("p must lie in (0, 1)")

    def adversarial_risk(self, w: float, eps: float) -> float:
        p = self.p
        return 0.5 * ((1 - p) * (abs(w) + eps) ** 2 + p * (abs(1 - w) + eps) ** 2)

    def minimizer(self, eps: float) -> float:
        return self.p + eps * (2 * self.p - 1)

    def optimal_risk(self, eps: float) -> float:
        return 0.5 * self.p * (1 - self.p) * (1 + 2 * eps) ** 2

    def measured(self, eps: float):
        """Numerically minimized ``(w*, R*)`` of the adversarial risk."""
        res = minimize_scalar(lambda w: self.adversarial_risk(w, eps), bounds=(-1.0, 2.0),
                              method="bounded", options={"xatol": 1e-12})
        return float(res.x), float(res.fun)

    def inputs(self, eps: float) -> LossBoundInputs:
        """Summaries at the standard minimizer ``w = p``.

        ``E|x - w|`` is minimized at the median, giving ``min(p, 1 - p)``;
        ``|x - w| <= max(p, 1 - p) + eps_max`` on the reachable inputs; the
        standard risk has unit curvature.
        """
        if eps > self.eps_max:
            raise ValueError("eps exceeds the range the Lipschitz constant was computed for")
        p = self.p
        return LossBoundInputs(r0=self.optimal_risk(0.0), eps=eps,
                               grad_dual_norm_exp=min(p, 1 - p),
                               lipschitz=max(p, 1 - p) + self.eps_max,
                               hessian_min_eig=1.0)
