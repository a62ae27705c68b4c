"""Density-matrix circuit simulator and variational training harness.

Layers, bottom up: `qstate` (states, operators), `gates` (unitaries and
noise channels), `hamiltonian` (lattice operators and their exponentials),
`circuit` (parameterized circuits and the batched simulator), `training`
(finite-difference descent), `datasets`/`experiments` (reproductions),
`estimators` (fit/predict facade), `checks` (invariant suite), `cli`.
"""

from .circuit import (
    AHL_GROUPS,
    QNN_GROUPS,
    BatchRunner,
    CircuitIR,
    Gate,
    ParamGate,
    ParamSet,
    ParamSlot,
    angle_encode,
    build_ahl_circuit,
    build_qnn_cls_circuit,
    build_qnn_sim_circuit,
    readout,
    run_density,
    run_pure,
)
from .datasets import (
    cosine_dataset,
    damped_sine_dataset,
    damped_sine_value,
    disk_classification_dataset,
)
from .estimators import QNNClassifier, QNNRegressor, RQNNClassifier, RQNNRegressor
from .experiments import (
    PRESETS,
    ExperimentConfig,
    compare_table,
    load_config,
    run_experiment,
    run_preset,
)
from .gates import KrausChannel, amplitude_damping, apply_channel, apply_gate, split_damping
from .hamiltonian import (
    Hamiltonian,
    LatticeSpec,
    PauliTerm,
    born_likelihood,
    driver_hamiltonian,
    ground_energy,
    interpolate,
    overlap_hamiltonian,
    problem_hamiltonian,
    redundancy_hamiltonian,
    time_evolution,
)
from .qstate import DensityMatrix, PauliString, StateVector, diagnostics, expectation
from .training import (
    Dataset,
    RunRecord,
    TrainConfig,
    accuracy,
    batch_predict,
    classify,
    fd_gradient,
    loss,
    predict,
    sgd_step,
    sign_agreement,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "AHL_GROUPS",
    "QNN_GROUPS",
    "BatchRunner",
    "CircuitIR",
    "Dataset",
    "DensityMatrix",
    "ExperimentConfig",
    "Gate",
    "Hamiltonian",
    "KrausChannel",
    "LatticeSpec",
    "ParamGate",
    "ParamSet",
    "ParamSlot",
    "PauliString",
    "PauliTerm",
    "PRESETS",
    "QNNClassifier",
    "QNNRegressor",
    "RQNNClassifier",
    "RQNNRegressor",
    "RunRecord",
    "StateVector",
    "TrainConfig",
    "accuracy",
    "amplitude_damping",
    "angle_encode",
    "apply_channel",
    "apply_gate",
    "batch_predict",
    "born_likelihood",
    "build_ahl_circuit",
    "build_qnn_cls_circuit",
    "build_qnn_sim_circuit",
    "classify",
    "compare_table",
    "cosine_dataset",
    "damped_sine_dataset",
    "damped_sine_value",
    "diagnostics",
    "disk_classification_dataset",
    "driver_hamiltonian",
    "expectation",
    "fd_gradient",
    "ground_energy",
    "interpolate",
    "load_config",
    "loss",
    "overlap_hamiltonian",
    "predict",
    "problem_hamiltonian",
    "readout",
    "redundancy_hamiltonian",
    "run_density",
    "run_experiment",
    "run_preset",
    "run_pure",
    "sgd_step",
    "sign_agreement",
    "split_damping",
    "time_evolution",
    "train",
]
