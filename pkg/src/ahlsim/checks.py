"""Self-contained invariant checks, runnable from the CLI (`ahl-sim check`).

Each check builds its own oracle instead of trusting the code under test:
the channel suite verifies CPTP algebraically, the decomposition suite
compares gate blocks against matrix exponentials, the gradient suite uses
the exact shift-rule derivative, and the interpolation suite rebuilds the
operators from raw Kronecker products before solving them densely.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .circuit import CircuitIR, ParamGate, ParamSet, ParamSlot, ahl_layer, run_density
from .circuit import readout as state_readout
from .gates import Gate, amplitude_damping, apply_channel
from .hamiltonian import (
    LatticeSpec,
    driver_hamiltonian,
    ground_energy,
    interpolate,
    problem_hamiltonian,
    redundancy_hamiltonian,
    time_evolution,
)
from .qstate import DensityMatrix, dagger
from .training import fd_gradient

TWO_QUBIT_PRESET = LatticeSpec.balanced(1)

THREE_QUBIT_PRESET = LatticeSpec(
    n_z_sites=1,
    n_x_sites=2,
    couplings=((0, 0, 1.0), (0, 1, 0.8)),
    site_fields=(1.0, 0.5),
    penalty_field=1.0,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


def _random_density(rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def check_channel_cptp(n_states: int = 1000, seed: int = 7, atol: float = 1e-10) -> CheckResult:
    """Damping preserves trace/hermiticity and its operators are complete."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    strengths = np.round(np.arange(0.0, 1.01, 0.1), 10)
    worst = 0.0
    for p in strengths:
        channel = amplitude_damping(float(p))
        completeness = sum(dagger(k) @ k for k in channel.operators)
        worst = max(worst, float(np.max(np.abs(completeness - np.eye(2)))))
    for _ in range(n_states):
        rho = _random_density(rng)
        for p in strengths:
            out = apply_channel(DensityMatrix(rho), amplitude_damping(float(p))).matrix
            worst = max(worst, abs(np.trace(out).real - 1.0))
            worst = max(worst, float(np.max(np.abs(out - dagger(out)))))
    elapsed = time.perf_counter() - start
    return CheckResult(
        "channel-cptp",
        worst <= atol and elapsed < 5.0,
        f"max deviation {worst:.3e} over {n_states} states x {len(strengths)} strengths, {elapsed:.2f}s",
        elapsed,
    )


def _block_matrix(ops, params: ParamSet, n_qubits: int, group: str) -> np.ndarray:
    """Product of a layer's bound gates for one parameter group."""
    u = np.eye(1 << n_qubits, dtype=complex)
    for op in ops:
        if isinstance(op, ParamGate) and op.slot.group == group:
            bound = Gate(op.name, (op.qubit,), op.scale * params.value(op.slot))
            u = bound.embedded(n_qubits) @ u
    return u


def check_block_decomposition(n_sets: int = 100, seed: int = 11, atol: float = 1e-10) -> CheckResult:
    """Per-layer drive and penalty gate blocks equal the exponentials of the
    corresponding lattice Hamiltonians at the slot value."""
    start = time.perf_counter()
    spec = TWO_QUBIT_PRESET
    layers = 3
    rng = np.random.default_rng(seed)
    driver = driver_hamiltonian(spec)
    penalty = redundancy_hamiltonian(spec)
    worst = 0.0
    for _ in range(n_sets):
        params = ParamSet.random(("drive", "overlap", "penalty"), layers, rng)
        for layer in range(layers):
            ops = ahl_layer(spec, layer)
            drive_block = _block_matrix(ops, params, spec.n_qubits, "drive")
            drive_exp = time_evolution(driver, params.value(ParamSlot("drive", layer)))
            worst = max(worst, float(np.max(np.abs(drive_block - drive_exp))))
            pen_block = _block_matrix(ops, params, spec.n_qubits, "penalty")
            pen_exp = time_evolution(penalty, params.value(ParamSlot("penalty", layer)))
            worst = max(worst, float(np.max(np.abs(pen_block - pen_exp))))
    elapsed = time.perf_counter() - start
    return CheckResult(
        "block-decomposition",
        worst <= atol and elapsed < 5.0,
        f"max deviation {worst:.3e} over {n_sets} parameter sets, {elapsed:.2f}s",
        elapsed,
    )


def check_gradient_oracle(n_angles: int = 50, seed: int = 13, atol: float = 1e-4) -> CheckResult:
    """Central differences match the shift rule on a single-RX expectation."""
    start = time.perf_counter()
    circuit = CircuitIR(
        n_qubits=1,
        n_layers=1,
        groups=("angle",),
        instructions=(ParamGate("rx", 0, ParamSlot("angle", 0)),),
    )

    def objective(vector: np.ndarray) -> float:
        params = ParamSet.from_vector(("angle",), 1, vector)
        return state_readout(run_density(circuit, params), 0)

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_angles):
        theta = rng.uniform(0.0, 2.0 * np.pi)
        fd = fd_gradient(objective, np.array([theta]), 0, 1e-4)
        plus = objective(np.array([theta + np.pi / 2]))
        minus = objective(np.array([theta - np.pi / 2]))
        shift = (plus - minus) / 2.0
        worst = max(worst, abs(fd - shift))
    elapsed = time.perf_counter() - start
    return CheckResult(
        "gradient-oracle",
        worst <= atol and elapsed < 2.0,
        f"max |fd - shift| {worst:.3e} over {n_angles} angles, {elapsed:.2f}s",
        elapsed,
    )


def _dense_lattice_operators(spec: LatticeSpec) -> tuple[np.ndarray, np.ndarray]:
    """Independent dense build of the driver and problem operators, straight
    from Kronecker products (no PauliTerm machinery)."""
    eye = np.eye(2)
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    z = np.array([[1.0, 0.0], [0.0, -1.0]])

    def at(op, qubit):
        mats = [eye] * spec.n_qubits
        mats[qubit] = op
        full = mats[0]
        for m in mats[1:]:
            full = np.kron(full, m)
        return full

    driver = sum(
        np.pi * spec.site_fields[k] * at(x, spec.x_qubit(k)) for k in range(spec.n_x_sites)
    )
    problem = np.zeros_like(driver)
    for j, k, strength in spec.couplings:
        problem = problem + (np.pi / 2.0) * strength * (at(z, spec.z_qubit(j)) + at(x, spec.x_qubit(k)))
    for k in range(spec.n_x_sites):
        problem = problem + spec.penalty_field * at(x, spec.x_qubit(k))
    return driver, problem


def check_interpolation_ground_energy(atol: float = 1e-8) -> CheckResult:
    """Ground energy along the interpolation matches a from-scratch dense
    solve, and the reported energy has a true eigenvector residual."""
    start = time.perf_counter()
    spec = THREE_QUBIT_PRESET
    driver = driver_hamiltonian(spec)
    problem = problem_hamiltonian(spec)
    dense_driver, dense_problem = _dense_lattice_operators(spec)
    worst = 0.0
    for s in (0.0, 0.25, 0.5, 0.75, 1.0):
        energy = ground_energy(interpolate(driver, problem, s))
        blend = (1.0 - s) * dense_driver + s * dense_problem
        eigvals, eigvecs = np.linalg.eigh(blend)
        worst = max(worst, abs(energy - float(eigvals[0])))
        residual = float(np.linalg.norm(blend @ eigvecs[:, 0] - eigvals[0] * eigvecs[:, 0]))
        worst = max(worst, residual)
    elapsed = time.perf_counter() - start
    return CheckResult(
        "interpolation-ground-energy",
        worst <= atol and elapsed < 2.0,
        f"max deviation {worst:.3e} over 5 interpolation points, {elapsed:.2f}s",
        elapsed,
    )


def run_all() -> list[CheckResult]:
    return [
        check_channel_cptp(),
        check_block_decomposition(),
        check_gradient_oracle(),
        check_interpolation_ground_energy(),
    ]
