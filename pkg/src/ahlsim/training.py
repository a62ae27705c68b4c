"""Finite-difference training loop and evaluation helpers.

Gradients use central differences, two circuit evaluations per parameter
slot. All slot gradients within an epoch are taken at the epoch's starting
parameters and applied in one step, so the slot order never changes the
result and the per-slot evaluations are safe to run in any order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import BatchRunner, CircuitIR, ParamSet, angle_encode, run_density
from .circuit import readout as state_readout


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float
    epochs: int
    fd_step: float = 1e-4
    seed: int = 0
    divergence_limit: float = 1e6

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")
        if not self.fd_step > 0:
            raise ValueError("fd_step must be positive")
        if not self.divergence_limit > 0:
            raise ValueError("divergence_limit must be positive")


@dataclass(frozen=True)
class Dataset:
    """Inputs and targets with a fixed train/test split: the first n_train
    rows train, the remaining n_test rows are held out."""

    inputs: np.ndarray
    labels: np.ndarray
    n_train: int
    n_test: int

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=float)
        labels = np.asarray(self.labels, dtype=float)
        if inputs.ndim == 1:
            inputs = inputs[:, None]
        if inputs.ndim != 2:
            raise ValueError("inputs must be 1-D or 2-D")
        if labels.shape != (inputs.shape[0],):
            raise ValueError("labels must be 1-D with one entry per input row")
        if self.n_train < 1 or self.n_test < 0:
            raise ValueError("need at least one training row")
        if self.n_train + self.n_test != inputs.shape[0]:
            raise ValueError("n_train + n_test must cover the rows exactly")
        inputs.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "labels", labels)

    @property
    def train_inputs(self) -> np.ndarray:
        return self.inputs[: self.n_train]

    @property
    def train_labels(self) -> np.ndarray:
        return self.labels[: self.n_train]

    @property
    def test_inputs(self) -> np.ndarray:
        return self.inputs[self.n_train :]

    @property
    def test_labels(self) -> np.ndarray:
        return self.labels[self.n_train :]


@dataclass(frozen=True)
class RunRecord:
    """Everything one training run produced."""

    loss_curve: np.ndarray
    params: ParamSet
    train_metric: float
    test_metric: float
    config: TrainConfig
    model: str = ""
    task: str = ""


def loss(predictions, targets) -> float:
    """Mean absolute error."""
    predictions = np.asarray(predictions, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if predictions.shape != targets.shape:
        raise ValueError("predictions and targets must have the same shape")
    return float(np.mean(np.abs(predictions - targets)))


def classify(values, boundary: float = 0.0) -> np.ndarray:
    """Map readouts to +/-1 labels; values on the boundary count as +1."""
    values = np.asarray(values, dtype=float)
    return np.where(values >= boundary, 1.0, -1.0)


def accuracy(predicted_labels, true_labels) -> float:
    predicted_labels = np.asarray(predicted_labels, dtype=float)
    true_labels = np.asarray(true_labels, dtype=float)
    if predicted_labels.shape != true_labels.shape:
        raise ValueError("label arrays must have the same shape")
    return float(np.mean(predicted_labels == true_labels))


def sign_agreement(predictions, labels, boundary: float = 0.0) -> float:
    """Fraction of readouts on the label's side of the decision boundary."""
    return accuracy(classify(predictions, boundary), labels)


def fit_boundary(predictions, labels) -> float:
    """Decision threshold maximizing accuracy on the given readouts.

    The readout family has no additive constant of its own, so the boundary
    of `classify` is fitted like any linear model's intercept: scan the
    midpoints between consecutive sorted readout values (plus one candidate
    below and one above everything) and keep the most accurate cut. Ties go
    to the cut with the widest gap between neighboring readouts, then to the
    lowest candidate, which keeps the choice deterministic.
    """
    predictions = np.asarray(predictions, dtype=float)
    labels = np.asarray(labels, dtype=float)
    if predictions.shape != labels.shape or predictions.ndim != 1 or not predictions.size:
        raise ValueError("need matching non-empty 1-D readouts and labels")
    order = np.argsort(predictions, kind="stable")
    sorted_preds = predictions[order]
    positive = labels[order] > 0
    # Cut k puts readouts [k:] on the +1 side. Correct = negatives below + positives above.
    below_neg = np.concatenate([[0], np.cumsum(~positive)])
    above_pos = positive.sum() - np.concatenate([[0], np.cumsum(positive)])
    correct = below_neg + above_pos
    candidates = np.concatenate(
        [[sorted_preds[0] - 1.0], 0.5 * (sorted_preds[:-1] + sorted_preds[1:]), [sorted_preds[-1] + 1.0]]
    )
    gaps = np.concatenate([[2.0], sorted_preds[1:] - sorted_preds[:-1], [2.0]])
    # A cut between two equal readouts is not realizable by a threshold.
    feasible = (k for k in range(len(candidates)) if gaps[k] > 0)
    best = max(feasible, key=lambda k: (correct[k], gaps[k], -candidates[k]))
    return float(candidates[best])


def fd_gradient(objective, vector: np.ndarray, index: int, step: float) -> float:
    """Central difference along one coordinate: two objective evaluations."""
    if not step > 0:
        raise ValueError("step must be positive")
    up = np.array(vector, dtype=float)
    down = up.copy()
    up[index] += step
    down[index] -= step
    return (objective(up) - objective(down)) / (2.0 * step)


def sgd_step(vector: np.ndarray, gradient: np.ndarray, rate: float) -> np.ndarray:
    vector = np.asarray(vector, dtype=float)
    gradient = np.asarray(gradient, dtype=float)
    if vector.shape != gradient.shape:
        raise ValueError("gradient shape must match the parameter vector")
    return vector - rate * gradient


def initial_params(circuit: CircuitIR, seed: int) -> ParamSet:
    """Seeded uniform [0, 2*pi) initialization, independent of data draws."""
    return ParamSet.random(circuit.groups, circuit.n_layers, np.random.default_rng([seed, 1]))


def train(
    circuit: CircuitIR,
    data: Dataset,
    config: TrainConfig,
    readout="last",
    metric=None,
    feature_scale: float = 1.0,
    model: str = "",
    task: str = "",
) -> RunRecord:
    """Train the circuit on the dataset's training split.

    The loss curve records the loss at the start of each epoch, before that
    epoch's update; metrics are computed with the final parameters. `metric`
    defaults to the training loss (mean absolute error).
    """
    if metric is None:
        metric = loss
    params = initial_params(circuit, config.seed)
    vec = params.vector
    runner = BatchRunner(circuit, data.train_inputs, readout=readout, feature_scale=feature_scale)
    targets = np.asarray(data.train_labels, dtype=float)
    curve = np.zeros(config.epochs)
    for epoch in range(config.epochs):
        current = loss(runner.rebase(vec), targets)
        if not np.isfinite(current) or current > config.divergence_limit:
            raise RuntimeError(f"training diverged at epoch {epoch}: loss={current!r}")
        curve[epoch] = current
        gradient = np.zeros_like(vec)
        for j in range(len(vec)):
            up = vec.copy()
            down = vec.copy()
            up[j] += config.fd_step
            down[j] -= config.fd_step
            rise = loss(runner.predictions(up), targets)
            fall = loss(runner.predictions(down), targets)
            gradient[j] = (rise - fall) / (2.0 * config.fd_step)
        vec = sgd_step(vec, gradient, config.learning_rate)
    final = params.with_vector(vec)
    train_metric = float(metric(runner.predictions(vec), targets))
    if data.n_test:
        test_runner = BatchRunner(circuit, data.test_inputs, readout=readout, feature_scale=feature_scale)
        test_metric = float(metric(test_runner.predictions(vec), np.asarray(data.test_labels, dtype=float)))
    else:
        test_metric = float("nan")
    return RunRecord(
        loss_curve=curve,
        params=final,
        train_metric=train_metric,
        test_metric=test_metric,
        config=config,
        model=model,
        task=task,
    )


def predict(
    circuit: CircuitIR,
    params: ParamSet,
    x,
    readout="last",
    feature_scale: float = 1.0,
) -> float:
    """Single-input prediction through the reference simulator."""
    features = np.atleast_1d(np.asarray(x, dtype=float)) * feature_scale
    prefix = angle_encode(features, circuit.n_qubits)
    state = run_density(circuit, params, prefix)
    if readout == "mean":
        return float(np.mean([state_readout(state, q) for q in range(circuit.n_qubits)]))
    if readout == "last":
        return state_readout(state, circuit.n_qubits - 1)
    if isinstance(readout, (tuple, list)):
        return float(np.mean([state_readout(state, int(q)) for q in readout]))
    return state_readout(state, int(readout))


def batch_predict(
    circuit: CircuitIR,
    params: ParamSet,
    features,
    readout="last",
    feature_scale: float = 1.0,
) -> np.ndarray:
    """Vectorized predictions for a batch of inputs."""
    runner = BatchRunner(circuit, features, readout=readout, feature_scale=feature_scale)
    return runner.predictions(params.vector)
