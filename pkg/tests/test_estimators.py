"""Estimator facade: fit/predict conventions, cloning, validation."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from ahlsim.estimators import (
    QNNClassifier,
    QNNRegressor,
    RQNNClassifier,
    RQNNRegressor,
)

REGRESSORS = [RQNNRegressor, QNNRegressor]
CLASSIFIERS = [RQNNClassifier, QNNClassifier]


def _regression_data(n=24, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 2 * np.pi, (n, 1))
    return X, np.cos(X[:, 0])


def _classification_data(n=20, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 1, (n, 2))
    y = np.where(X[:, 0] + X[:, 1] > 1.0, "hi", "lo")
    return X, y


# --- regressors ---


@pytest.mark.parametrize("cls", REGRESSORS)
def test_regressor_fit_predict_shapes(cls):
    X, y = _regression_data()
    model = cls(depth=2, epochs=3, learning_rate=0.1, seed=1)
    assert model.fit(X, y) is model
    preds = model.predict(X)
    assert preds.shape == (len(X),)
    assert np.all(np.abs(preds) <= 1.0 + 1e-12)
    assert len(model.loss_curve_) == 3
    assert model.n_features_in_ == 1


@pytest.mark.parametrize("cls", REGRESSORS)
def test_regressor_is_deterministic(cls):
    X, y = _regression_data()
    a = cls(depth=2, epochs=2, seed=3).fit(X, y).predict(X)
    b = cls(depth=2, epochs=2, seed=3).fit(X, y).predict(X)
    assert np.array_equal(a, b)


def test_regressor_unfitted_raises():
    X, _ = _regression_data()
    with pytest.raises(NotFittedError):
        RQNNRegressor().predict(X)


def test_regressor_feature_count_mismatch():
    X, y = _regression_data()
    model = RQNNRegressor(depth=2, epochs=2).fit(X, y)
    with pytest.raises(ValueError):
        model.predict(np.hstack([X, X]))


# --- classifiers ---


@pytest.mark.parametrize("cls", CLASSIFIERS)
def test_classifier_fit_predict_labels(cls):
    X, y = _classification_data()
    model = cls(depth=2, epochs=3, seed=1)
    model.fit(X, y)
    preds = model.predict(X)
    assert preds.shape == (len(X),)
    assert set(preds) <= {"hi", "lo"}
    assert list(model.classes_) == ["hi", "lo"]
    scores = model.decision_function(X)
    assert scores.shape == (len(X),)
    # the fitted threshold reproduces predict exactly
    want = np.where(scores >= model.boundary_, "lo", "hi")
    assert np.array_equal(preds, want)


@pytest.mark.parametrize("cls", CLASSIFIERS)
def test_classifier_rejects_multiclass(cls):
    X = np.zeros((6, 2))
    y = ["a", "b", "c", "a", "b", "c"]
    with pytest.raises(ValueError):
        cls(depth=2, epochs=2).fit(X, y)


def test_classifier_numeric_labels_round_trip():
    X, y = _classification_data()
    numeric = np.where(y == "hi", 5, -2)
    model = RQNNClassifier(depth=2, epochs=2, seed=0).fit(X, numeric)
    assert set(model.predict(X)) <= {5, -2}


# --- sklearn integration ---


@pytest.mark.parametrize("cls", REGRESSORS + CLASSIFIERS)
def test_get_params_clone_round_trip(cls):
    model = cls(depth=4, epochs=7, seed=9)
    params = model.get_params()
    assert params["depth"] == 4 and params["epochs"] == 7 and params["seed"] == 9
    copy = clone(model)
    assert copy.get_params() == params


def test_set_params_chains():
    model = RQNNRegressor()
    assert model.set_params(depth=5, noise=0.0) is model
    assert model.depth == 5 and model.noise == 0.0


def test_clone_discards_fitted_state():
    X, y = _regression_data(12)
    model = RQNNRegressor(depth=2, epochs=2).fit(X, y)
    fresh = clone(model)
    with pytest.raises(NotFittedError):
        fresh.predict(X)
