import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from otrisk import MixtureRiskBound, RobustRiskClassifier
from otrisk.discrete import depsilon_exact
from otrisk.intervals import classifier_risk
from otrisk.measures import BinaryProblem, EmpiricalMeasure


def blobs(rng, n=30, d=2, gap=1.5):
    X = np.vstack([rng.normal(size=(n, d)), rng.normal(size=(n, d)) + gap])
    y = np.array(["a"] * n + ["b"] * n)
    return X, y


def test_params_and_clone():
    clf = RobustRiskClassifier(eps=0.3, metric="chebyshev")
    assert clf.get_params() == {"eps": 0.3, "metric": "chebyshev", "method": "auto"}
    c2 = clone(clf).set_params(eps=0.1)
    assert c2.eps == 0.1 and clf.eps == 0.3
    assert clone(MixtureRiskBound(sigma=0.2)).get_params()["sigma"] == 0.2


def test_fit_matches_solver(rng):
    X, y = blobs(rng)
    clf = RobustRiskClassifier(eps=0.2).fit(X, y)
    cert = depsilon_exact(EmpiricalMeasure(X[:30]), EmpiricalMeasure(X[30:]), "euclidean", 0.2)
    assert clf.risk_ == cert.risk and list(clf.classes_) == ["a", "b"]


def test_predict_attains_optimal_risk_on_training_classes(rng):
    for metric in ("euclidean", "chebyshev"):
        X, y = blobs(rng)
        e = 0.25
        clf = RobustRiskClassifier(eps=e, metric=metric).fit(X, y)
        # clean error never exceeds the robust risk the rule attains
        assert np.mean(clf.predict(X) != y) <= clf.risk_ + 1e-12


def test_one_dimensional_classifier_attains_risk(rng):
    X = rng.normal(size=(40, 1))
    X[20:] += 1.0
    y = np.repeat([0, 1], 20)
    e = 0.2
    clf = RobustRiskClassifier(eps=e, method="sweep").fit(X, y)
    # decide-class-0 region is the witness union of eps-balls; check its robust risk in closed form
    from otrisk.intervals import IntervalSet

    # a hair of margin: with atoms the closed complement would touch each witness point at exactly eps
    r = e + 1e-9
    region = IntervalSet((p - r, p + r) for p in clf.witness_points_[:, 0])
    P = BinaryProblem(EmpiricalMeasure(X[20:]), EmpiricalMeasure(X[:20]))
    assert classifier_risk(P, region, e) == pytest.approx(clf.risk_, abs=1e-12)


def test_unfitted_and_bad_labels(rng):
    with pytest.raises(NotFittedError):
        RobustRiskClassifier().predict([[0.0]])
    with pytest.raises(ValueError):
        RobustRiskClassifier().fit([[0.0], [1.0], [2.0]], [0, 1, 2])


def test_mixture_bound_estimator(rng):
    X, y = blobs(rng, n=12)
    est = MixtureRiskBound(eps=0.2, sigma=0.0).fit(X, y)
    assert est.risk_lb_ == RobustRiskClassifier(eps=0.2).fit(X, y).risk_
    X2 = np.vstack([X, rng.normal(size=(3, 2))])
    y2 = np.concatenate([y, ["a"] * 3])
    est = MixtureRiskBound(eps=0.2, sigma=0.3, random_state=1).fit(X2, y2)
    assert 0 <= est.risk_lb_ <= 0.5 and len(est.report_.matching) == 12
