"""scikit-learn style wrappers around the exact and mixture solvers."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.multiclass import unique_labels
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .discrete import depsilon_exact
from .measures import EmpiricalMeasure, Metric, pairwise_distances
from .mixture import MixtureSpec, balance_counts, mixture_risk_lb


def _split(X, y):
    X, y = check_X_y(X, y, dtype=float)
    classes = unique_labels(y)
    if len(classes) != 2:
        raise ValueError(f"expected exactly two classes, got {len(classes)}")
    return X, y, classes, EmpiricalMeasure(X[y == classes[0]]), EmpiricalMeasure(X[y == classes[1]])


class RobustRiskClassifier(ClassifierMixin, BaseEstimator):
    """Optimal robust classifier of two equally weighted empirical classes.

    ``fit`` solves the threshold transport problem between the two class
    samples and keeps its dual witness: the first class is predicted
    within distance ``eps`` of the witness points, the second elsewhere.
    On the training classes this rule attains the optimal robust risk
    ``risk_``.

    Parameters
    ----------
    eps : float, default=0.0
        Adversarial budget.
    metric : {"euclidean", "chebyshev"}, default="euclidean"
    method : {"auto", "matching", "flow", "sweep"}, default="auto"
        Transport solver, see :func:`otrisk.discrete.depsilon_exact`.

    Attributes
    ----------
    classes_ : ndarray of shape (2,)
    depsilon_ : float
    risk_ : float
    certificate_ : TransportCertificate
    witness_points_ : ndarray of shape (k, n_features)

    Examples
    --------
    >>> clf = RobustRiskClassifier(eps=0.25).fit([[0.0], [1.0]], [0, 1])
    >>> clf.risk_, clf.predict([[0.1], [0.9]]).tolist()
    (0.0, [0, 1])
    """

    def __init__(self, eps=0.0, metric="euclidean", method="auto"):
        self.eps = eps
        self.metric = metric
        self.method = method

    def fit(self, X, y):
        X, y, classes, mu, nu = _split(X, y)
        metric = Metric.parse(self.metric)
        cert = depsilon_exact(mu, nu, metric, self.eps, method=self.method)
        if cert.witness_support is None:
            # the 1-D sweep has no cut; the flow solver provides one
            cert = depsilon_exact(mu, nu, metric, self.eps, method="flow")
        self.classes_ = classes
        self.n_features_in_ = X.shape[1]
        self.certificate_ = cert
        self.depsilon_ = cert.cost
        self.risk_ = cert.risk
        self.witness_points_ = mu.points[list(cert.witness_support)]
        self.metric_ = metric
        return self

    def decision_function(self, X):
        """``eps`` minus the distance to the nearest witness point; nonnegative means the first class."""
        check_is_fitted(self)
        X = check_array(X, dtype=float)
        if len(self.witness_points_) == 0:
            return np.full(X.shape[0], -np.inf)
        d = pairwise_distances(self.metric_, X, self.witness_points_).min(axis=1)
        return self.eps - d

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, self.classes_[0], self.classes_[1])


class MixtureRiskBound(BaseEstimator):
    """Lower bound on the robust risk of Gaussian-smoothed classes.

    Parameters
    ----------
    eps : float, default=0.0
    sigma : float, default=0.0
        Smoothing scale; ``0`` gives the exact empirical risk.
    metric : {"euclidean", "chebyshev"}, default="euclidean"
    mode : {"tight", "empirical"}, default="tight"
    random_state : int, default=0
        Seed for subsampling the larger class when counts differ.

    Attributes
    ----------
    risk_lb_ : float
    report_ : MixtureBoundReport
    """

    def __init__(self, eps=0.0, sigma=0.0, metric="euclidean", mode="tight", random_state=0):
        self.eps = eps
        self.sigma = sigma
        self.metric = metric
        self.mode = mode
        self.random_state = random_state

    def fit(self, X, y):
        X, y, classes, mu, nu = _split(X, y)
        if mu.size != nu.size:
            mu, nu = balance_counts(mu, nu, self.random_state)
        rep = mixture_risk_lb(MixtureSpec(mu, self.sigma), MixtureSpec(nu, self.sigma),
                              self.metric, self.eps, self.mode)
        self.classes_ = classes
        self.n_features_in_ = X.shape[1]
        self.report_ = rep
        self.risk_lb_ = rep.risk_lb
        return self
