"""Synthetic datasets for the regression and classification experiments.

All generators are pure functions of (sizes, seed): dataset draws come from
``default_rng([seed, 0])``, the training loop seeds ``default_rng([seed, 1])``,
so the two streams never overlap for the same experiment seed.
"""

from __future__ import annotations

import numpy as np

from .training import Dataset


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), 0])


def cosine_dataset(n_train: int = 600, n_test: int = 200, seed: int = 0) -> Dataset:
    """x uniform in [0, 2*pi), y = cos(x)."""
    if n_train < 1 or n_test < 1:
        raise ValueError("need at least one point per split")
    rng = _rng(seed)
    x = rng.uniform(0.0, 2.0 * np.pi, n_train + n_test)
    return Dataset(x, np.cos(x), n_train, n_test)


def damped_sine_value(x, decay: float = 0.2, frequency: float = 1.0) -> np.ndarray:
    """exp(-decay*x) * sin(frequency*x), rescaled so the global peak is 1.

    The envelope decays, so the largest extremum is the first stationary
    point x* = atan(frequency/decay)/frequency; dividing by |y(x*)| puts
    every value in [-1, 1].
    """
    x = np.asarray(x, dtype=float)
    x_peak = np.arctan2(frequency, decay) / frequency
    peak = np.exp(-decay * x_peak) * np.sin(frequency * x_peak)
    return np.exp(-decay * x) * np.sin(frequency * x) / peak


def damped_sine_dataset(
    n_train: int = 600,
    n_test: int = 200,
    seed: int = 0,
    decay: float = 0.2,
    frequency: float = 1.0,
) -> Dataset:
    """x uniform in [0, 2*pi), y the normalized damped sine.

    The default frequency matches the one radian-per-unit pitch of the angle
    encoding: a two-qubit readout model is a bounded trigonometric family at
    the encoded frequency, so a carrier it cannot express would turn this
    task into a test of representability rather than of noise robustness.
    """
    if n_train < 1 or n_test < 1:
        raise ValueError("need at least one point per split")
    if decay <= 0 or frequency <= 0:
        raise ValueError("decay and frequency must be positive")
    rng = _rng(seed)
    x = rng.uniform(0.0, 2.0 * np.pi, n_train + n_test)
    return Dataset(x, damped_sine_value(x, decay, frequency), n_train, n_test)


def disk_labels(points, radius: float = 0.35, center=(0.5, 0.5)) -> np.ndarray:
    """+1 inside the disk, -1 outside."""
    points = np.asarray(points, dtype=float)
    dist = np.hypot(points[..., 0] - center[0], points[..., 1] - center[1])
    return np.where(dist < radius, 1.0, -1.0)


def disk_classification_dataset(
    n_train: int = 300,
    n_test: int = 150,
    seed: int = 0,
    radius: float = 0.35,
    margin: float = 0.3,
) -> Dataset:
    """2-D points in [0,1]^2 labelled by a centered disk of the given radius.

    Candidates whose distance to the circle is within ``margin * radius`` are
    rejected, so no emitted point sits inside the boundary band. Classes are
    balanced by quota (the +1 class gets the extra point when the total is
    odd); the order of the final sample is shuffled before splitting.
    """
    if n_train < 1 or n_test < 0:
        raise ValueError("need at least one training point")
    if not 0 <= margin < 1:
        raise ValueError("margin must be in [0, 1): the band would swallow the inner class")
    if not 0 < radius < 0.5:
        raise ValueError("radius must keep the disk inside the unit square")
    total = n_train + n_test
    quota = {1.0: (total + 1) // 2, -1.0: total // 2}
    counts = {1.0: 0, -1.0: 0}
    rng = _rng(seed)
    points = np.empty((total, 2))
    labels = np.empty(total)
    filled = 0
    while filled < total:
        candidate = rng.uniform(0.0, 1.0, 2)
        dist = np.hypot(candidate[0] - 0.5, candidate[1] - 0.5)
        if abs(dist - radius) < margin * radius:
            continue
        label = 1.0 if dist < radius else -1.0
        if counts[label] >= quota[label]:
            continue
        points[filled] = candidate
        labels[filled] = label
        counts[label] += 1
        filled += 1
    order = rng.permutation(total)
    return Dataset(points[order], labels[order], n_train, n_test)
