import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from scaled_uniform import InfeasibleSampleError, ScaledUniformScale


def test_params_roundtrip():
    model = ScaledUniformScale(k=0.3, estimator="sc", gamma=0.1)
    assert model.get_params() == {"k": 0.3, "estimator": "sc", "gamma": 0.1}
    copy = clone(model).set_params(estimator="gm")
    assert copy.estimator == "gm" and model.estimator == "sc"


def test_fit_attributes():
    model = ScaledUniformScale(k=0.5).fit([0.9, 1.2, 1.0])
    assert model.theta_ == pytest.approx(0.9779405428694529, rel=1e-14)
    assert model.sure_interval_ == pytest.approx((0.8, 1.8))
    assert model.n_samples_ == 3
    lo, hi = model.interval_
    assert 0.8 <= lo < model.fiducial_.median() < hi <= 1.8


def test_column_vector_input():
    X = np.array([[0.9], [1.2], [1.0]])
    assert ScaledUniformScale(k=0.5, estimator="rb").fit(X).predict() == pytest.approx(1.05)


def test_predict_broadcast():
    model = ScaledUniformScale(k=0.5).fit([1.0, 1.1])
    np.testing.assert_allclose(model.predict(np.zeros((4, 2))), model.theta_)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ScaledUniformScale().predict()


@pytest.mark.parametrize("X", [[], [1.0, -2.0], [[1.0, 2.0], [3.0, 4.0]], [np.nan]])
def test_bad_input(X):
    with pytest.raises(ValueError):
        ScaledUniformScale(k=0.5).fit(X)


def test_infeasible():
    with pytest.raises(InfeasibleSampleError):
        ScaledUniformScale(k=0.5).fit([1.0, 3.1])


def test_bad_params_checked_at_fit():
    model = ScaledUniformScale(k=2.0)
    with pytest.raises(ValueError):
        model.fit([1.0])
    with pytest.raises(KeyError):
        ScaledUniformScale(estimator="median").fit([1.0])


def test_score():
    model = ScaledUniformScale(k=0.5, estimator="mle").fit([0.9, 1.2, 1.0])
    assert model.score([0.9, 1.2, 1.0]) == pytest.approx(-3 * np.log(2 * 0.5 * 0.8))
    assert model.score([5.0]) == -np.inf


def test_interval_options():
    model = ScaledUniformScale(k=0.5).fit([0.9, 1.2, 1.0])
    lo, hi = model.interval(0.1, kind="hdi")
    assert lo == model.sure_interval_[0]
