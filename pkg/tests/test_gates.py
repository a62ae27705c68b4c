"""Tests for gates, embeddings, and the amplitude-damping channel."""

import numpy as np
import pytest

from ahlsim.gates import (
    Gate,
    KrausChannel,
    amplitude_damping,
    apply_channel,
    apply_gate,
    compose_damping,
    embed_cnot,
    embed_single,
    rotation_matrix,
    split_damping,
)
from ahlsim.qstate import DensityMatrix, StateVector, dagger, diagnostics, expectation, pauli_matrix

X = pauli_matrix("X")
Z = pauli_matrix("Z")


# --- rotation_matrix ---

@pytest.mark.parametrize("axis", ["x", "y", "z"])
@pytest.mark.parametrize("angle", [0.0, 0.3, np.pi / 2, np.pi, 4.0])
def test_rotation_unitary(axis, angle):
    u = rotation_matrix(axis, angle)
    assert np.max(np.abs(u @ dagger(u) - np.eye(2))) < 1e-12


def test_rotation_closed_forms():
    assert np.allclose(rotation_matrix("x", np.pi), -1j * X)
    assert np.allclose(rotation_matrix("y", np.pi), np.array([[0, -1], [1, 0]]))
    assert np.allclose(rotation_matrix("z", np.pi), np.diag([-1j, 1j]))
    for axis in "xyz":
        assert np.allclose(rotation_matrix(axis, 0.0), np.eye(2))


def test_rotation_composition():
    a, b = 0.7, 1.9
    lhs = rotation_matrix("x", a) @ rotation_matrix("x", b)
    assert np.max(np.abs(lhs - rotation_matrix("x", a + b))) < 1e-12


def test_rotation_rejects_unknown_axis():
    with pytest.raises(ValueError):
        rotation_matrix("w", 1.0)


# --- embeddings ---

def test_embed_single_positions():
    op = rotation_matrix("x", 0.4)
    assert np.allclose(embed_single(op, 0, 2), np.kron(op, np.eye(2)))
    assert np.allclose(embed_single(op, 1, 2), np.kron(np.eye(2), op))
    with pytest.raises(ValueError):
        embed_single(op, 2, 2)


def test_embed_cnot_truth_table():
    cx = embed_cnot(0, 1, 2)
    # qubit 0 (leftmost) controls: |10> -> |11>, |11> -> |10>
    for src, dst in ((0, 0), (1, 1), (2, 3), (3, 2)):
        assert cx[dst, src] == 1.0
    assert np.allclose(cx @ cx, np.eye(4))


def test_embed_cnot_nonadjacent():
    cx = embed_cnot(0, 2, 3)
    psi = np.zeros(8)
    psi[4] = 1.0  # |100>
    out = cx @ psi
    assert out[5] == 1.0  # |101>


def test_embed_cnot_validation():
    with pytest.raises(ValueError):
        embed_cnot(1, 1, 2)
    with pytest.raises(ValueError):
        embed_cnot(0, 3, 2)


# --- Gate ---

def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("cnot", (0, 1), angle=0.5)
    with pytest.raises(ValueError):
        Gate("cnot", (1, 1))
    with pytest.raises(ValueError):
        Gate("rx", (0,))
    with pytest.raises(ValueError):
        Gate("rx", (0, 1), angle=0.5)
    with pytest.raises(ValueError):
        Gate("hadamard", (0,))


def test_apply_gate_pure_vs_density():
    psi = StateVector.zero(2)
    g = Gate("ry", (1,), angle=1.1)
    pure = apply_gate(psi, g).density()
    mixed = apply_gate(psi.density(), g)
    assert np.max(np.abs(pure.matrix - mixed.matrix)) < 1e-12


def test_apply_gate_rx_rotates_z_expectation():
    theta = 0.8
    psi = apply_gate(StateVector.zero(1), Gate("rx", (0,), angle=theta))
    n = psi.n_qubits
    assert n == 1
    assert abs(expectation(psi, Z) - np.cos(theta)) < 1e-12


# --- KrausChannel ---

def test_kraus_completeness_enforced():
    half = np.eye(2) * np.sqrt(0.5)
    KrausChannel("ok", (half, half))
    with pytest.raises(ValueError):
        KrausChannel("bad", (half,))
    with pytest.raises(ValueError):
        KrausChannel("empty", ())


def test_amplitude_damping_bounds():
    for p in (-0.1, 1.1):
        with pytest.raises(ValueError):
            amplitude_damping(p)


def test_damping_p0_is_identity():
    rho = apply_gate(StateVector.zero(1), Gate("ry", (0,), angle=0.9)).density()
    out = apply_channel(rho, amplitude_damping(0.0))
    assert np.max(np.abs(out.matrix - rho.matrix)) < 1e-12


def test_damping_p1_fully_decays():
    one = StateVector.basis(1, 1).density()
    out = apply_channel(one, amplitude_damping(1.0))
    assert np.max(np.abs(out.matrix - np.diag([1.0, 0.0]))) < 1e-12


@pytest.mark.parametrize("p", [0.0, 0.05, 0.3, 0.7, 1.0])
def test_damping_excited_population(p):
    # |1><1| -> diag(p, 1-p), so <Z> = 2p - 1
    one = StateVector.basis(1, 1).density()
    out = apply_channel(one, amplitude_damping(p))
    assert abs(expectation(out, Z) - (2.0 * p - 1.0)) < 1e-12


def test_channel_requires_density_matrix():
    with pytest.raises(TypeError):
        apply_channel(StateVector.zero(1), amplitude_damping(0.1))


def test_channel_preserves_state_validity():
    # Random two-qubit states stay trace-1, Hermitian, PSD under damping.
    rng = np.random.default_rng(11)
    for _ in range(25):
        amps = rng.normal(size=4) + 1j * rng.normal(size=4)
        rho = StateVector(amps / np.linalg.norm(amps)).density()
        for p in (0.05, 0.5, 0.95):
            rho_out = apply_channel(rho, amplitude_damping(p, qubit=1))
            assert diagnostics(rho_out).ok(atol=1e-10)


def test_channel_on_selected_qubit_only():
    # Damping qubit 1 leaves the qubit-0 marginal of a product state alone.
    psi = apply_gate(StateVector.zero(2), Gate("rx", (0,), angle=0.7))
    psi = apply_gate(psi, Gate("rx", (1,), angle=1.3))
    rho = apply_channel(psi.density(), amplitude_damping(0.4, qubit=1))
    z0 = np.kron(Z, np.eye(2))
    assert abs(expectation(rho, z0) - np.cos(0.7)) < 1e-12


# --- damping arithmetic ---

def test_compose_damping_formula():
    assert abs(compose_damping(0.2, 0.3) - 0.44) < 1e-12
    assert compose_damping(0.0, 0.0) == 0.0
    assert compose_damping(1.0, 0.5) == 1.0


@pytest.mark.parametrize("total", [0.0, 0.05, 0.31, 0.9, 1.0])
@pytest.mark.parametrize("segments", [1, 2, 5, 10])
def test_split_damping_round_trip(total, segments):
    per = split_damping(total, segments)
    acc = 0.0
    for _ in range(segments):
        acc = compose_damping(acc, per)
    assert abs(acc - total) < 1e-12


def test_split_damping_matches_channel_composition():
    # Two split channels in sequence equal one channel of the full strength.
    total = 0.4
    per = split_damping(total, 2)
    rho = apply_gate(StateVector.zero(1), Gate("ry", (0,), angle=1.2)).density()
    twice = apply_channel(apply_channel(rho, amplitude_damping(per)), amplitude_damping(per))
    once = apply_channel(rho, amplitude_damping(total))
    assert np.max(np.abs(twice.matrix - once.matrix)) < 1e-12


def test_split_damping_validation():
    with pytest.raises(ValueError):
        split_damping(0.5, 0)
    with pytest.raises(ValueError):
        split_damping(1.5, 2)
