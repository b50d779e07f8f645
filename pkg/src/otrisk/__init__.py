"""Optimal adversarial risk for binary classification via threshold optimal transport."""

from .analytic import (
    AnalyticSolution,
    IntersectionRoots,
    gaussian_equal_var,
    gaussian_general,
    gaussian_intersections,
    gaussian_iso_ddim,
    gaussian_same_mean,
    motivating_example,
    quantile_sup_distance,
    triangular_pair,
    uniform_pair,
    zero_cost_check,
)
from .discrete import (
    TransportCertificate,
    depsilon_exact,
    risk_from_depsilon,
    strassen_gap,
    wasserstein_p,
    wp_lower_bound,
)
from .estimators import MixtureRiskBound, RobustRiskClassifier
from .intervals import Halfspace, IntervalSet, classifier_risk
from .loss_bounds import LossBoundInputs, convex_lower_bound, deviation_bound, lipschitz_upper_bound
from .measures import BinaryProblem, EmpiricalMeasure, Gaussian, IsoGaussian, Metric, Triangular, Uniform
from .mixture import MixtureBoundReport, MixtureSpec, mixture_risk_lb, pair_cost, sigma_star

__version__ = "0.1.0"

__all__ = [
    "AnalyticSolution", "BinaryProblem", "EmpiricalMeasure", "Gaussian", "Halfspace",
    "IntersectionRoots", "IntervalSet", "IsoGaussian", "LossBoundInputs", "Metric",
    "MixtureBoundReport", "MixtureRiskBound", "MixtureSpec", "RobustRiskClassifier",
    "TransportCertificate", "Triangular", "Uniform", "classifier_risk", "convex_lower_bound",
    "depsilon_exact", "deviation_bound", "gaussian_equal_var", "gaussian_general",
    "gaussian_intersections", "gaussian_iso_ddim", "gaussian_same_mean", "lipschitz_upper_bound",
    "mixture_risk_lb", "motivating_example", "pair_cost", "quantile_sup_distance",
    "risk_from_depsilon", "sigma_star", "strassen_gap", "triangular_pair", "uniform_pair",
    "wasserstein_p", "wp_lower_bound", "zero_cost_check",
]
