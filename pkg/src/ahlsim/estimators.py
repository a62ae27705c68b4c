"""Estimator facade over the circuit builders and the training loop.

Thin wrappers following the usual fit/predict conventions: hyperparameters
are stored verbatim in ``__init__``, all work happens in ``fit``, fitted
state lands in trailing-underscore attributes. The functional layer
(`build_ahl_circuit`, `train`, ...) stays the primary API; these classes
exist so the models drop into pipelines and grid searches.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .circuit import build_ahl_circuit, build_qnn_cls_circuit, build_qnn_sim_circuit
from .hamiltonian import LatticeSpec
from .training import Dataset, TrainConfig, batch_predict, fit_boundary, train


class _CircuitModel(BaseEstimator):
    _readout = "last"

    def __init__(
        self,
        depth=10,
        learning_rate=0.2,
        epochs=300,
        noise=0.05,
        noise_policy="layer",
        fd_step=1e-4,
        seed=0,
        feature_scale=1.0,
    ):
        self.depth = depth
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.noise = noise
        self.noise_policy = noise_policy
        self.fd_step = fd_step
        self.seed = seed
        self.feature_scale = feature_scale

    def _build_circuit(self, n_features: int):
        raise NotImplementedError

    def _readout_mode(self):
        return self._readout

    def _fit_circuit(self, X, y):
        self.n_features_in_ = X.shape[1]
        self.circuit_ = self._build_circuit(X.shape[1])
        data = Dataset(X, y, n_train=X.shape[0], n_test=0)
        config = TrainConfig(
            learning_rate=self.learning_rate,
            epochs=self.epochs,
            fd_step=self.fd_step,
            seed=self.seed,
        )
        record = train(
            self.circuit_,
            data,
            config,
            readout=self._readout_mode(),
            feature_scale=self.feature_scale,
        )
        self.params_ = record.params
        self.loss_curve_ = record.loss_curve
        self.train_loss_ = record.train_metric
        return self

    def _raw_predictions(self, X):
        check_is_fitted(self, "params_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        return batch_predict(
            self.circuit_,
            self.params_,
            X,
            readout=self._readout_mode(),
            feature_scale=self.feature_scale,
        )


class _RegressorBase(RegressorMixin, _CircuitModel):
    _readout = "last"

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        return self._fit_circuit(X, y)

    def predict(self, X):
        return self._raw_predictions(X)


class _ClassifierBase(ClassifierMixin, _CircuitModel):
    _readout = "last"

    def __init__(
        self,
        depth=3,
        learning_rate=0.1,
        epochs=100,
        noise=0.05,
        noise_policy="layer",
        fd_step=1e-4,
        seed=0,
        feature_scale=6.5,
    ):
        super().__init__(
            depth=depth,
            learning_rate=learning_rate,
            epochs=epochs,
            noise=noise,
            noise_policy=noise_policy,
            fd_step=fd_step,
            seed=seed,
            feature_scale=feature_scale,
        )

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float)
        self.classes_ = np.unique(y)
        if len(self.classes_) != 2:
            raise ValueError("binary classification only: need exactly two classes")
        encoded = np.where(y == self.classes_[1], 1.0, -1.0)
        self._fit_circuit(X, encoded)
        # The readout has no additive constant, so the decision threshold is
        # fitted on the training data like an intercept.
        self.boundary_ = fit_boundary(self._raw_predictions(X), encoded)
        return self

    def decision_function(self, X):
        """Raw <Z> readout in [-1, 1]; at or above ``boundary_`` means the
        second class."""
        return self._raw_predictions(X)

    def predict(self, X):
        return np.where(
            self.decision_function(X) >= self.boundary_, self.classes_[1], self.classes_[0]
        )


class RQNNRegressor(_RegressorBase):
    """Regressor built on the layered lattice ansatz with damping noise."""

    def __init__(
        self,
        depth=10,
        learning_rate=0.2,
        epochs=300,
        noise=0.05,
        noise_policy="layer",
        fd_step=1e-4,
        seed=0,
        feature_scale=1.0,
        lattice=None,
    ):
        super().__init__(
            depth=depth,
            learning_rate=learning_rate,
            epochs=epochs,
            noise=noise,
            noise_policy=noise_policy,
            fd_step=fd_step,
            seed=seed,
            feature_scale=feature_scale,
        )
        self.lattice = lattice

    def _build_circuit(self, n_features: int):
        spec = self.lattice if self.lattice is not None else LatticeSpec.balanced(n_features)
        return build_ahl_circuit(spec, self.depth, noise=self.noise, noise_policy=self.noise_policy)


class QNNRegressor(_RegressorBase):
    """Baseline regressor: mix/rotate layers on 2*n_features qubits."""

    def _build_circuit(self, n_features: int):
        return build_qnn_sim_circuit(
            self.depth, n_qubits=2 * n_features, noise=self.noise, noise_policy=self.noise_policy
        )


class RQNNClassifier(_ClassifierBase):
    """Binary classifier on the lattice ansatz; labels are the two values in y."""

    def __init__(
        self,
        depth=2,
        learning_rate=0.1,
        epochs=100,
        noise=0.05,
        noise_policy="layer",
        fd_step=1e-4,
        seed=0,
        feature_scale=6.5,
        lattice=None,
    ):
        super().__init__(
            depth=depth,
            learning_rate=learning_rate,
            epochs=epochs,
            noise=noise,
            noise_policy=noise_policy,
            fd_step=fd_step,
            seed=seed,
            feature_scale=feature_scale,
        )
        self.lattice = lattice

    def _build_circuit(self, n_features: int):
        return build_ahl_circuit(
            self._lattice_spec(n_features), self.depth, noise=self.noise, noise_policy=self.noise_policy
        )

    def _lattice_spec(self, n_features: int):
        return self.lattice if self.lattice is not None else LatticeSpec.balanced(n_features, 0.5)

    def _readout_mode(self):
        # Average <Z> over the x-sites only. After encoding, z-sites see
        # nothing but diagonal gates, so their readout is a fixed function of
        # the input and would pin the decision function.
        spec = self._lattice_spec(self.n_features_in_)
        return tuple(spec.x_qubit(k) for k in range(spec.n_x_sites))


class QNNClassifier(_ClassifierBase):
    """Baseline binary classifier on 2*n_features qubits."""

    def _build_circuit(self, n_features: int):
        return build_qnn_cls_circuit(
            self.depth, n_qubits=2 * n_features, noise=self.noise, noise_policy=self.noise_policy
        )
