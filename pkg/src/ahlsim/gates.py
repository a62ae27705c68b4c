"""Rotation gates, CNOT, and Kraus noise channels on dense states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import DensityMatrix, StateVector, dagger, kron_all, pauli_matrix

# Completeness of Kraus decompositions is checked at this tolerance.
ATOL_CHANNEL = 1e-10

ROTATION_AXES = ("x", "y", "z")

_PROJ0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
_PROJ1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
_EYE2 = np.eye(2, dtype=complex)


def rotation_matrix(axis: str, angle: float) -> np.ndarray:
    """Single-qubit rotation exp(-i * angle * sigma_axis / 2)."""
    if axis not in ROTATION_AXES:
        raise ValueError(f"unknown rotation axis {axis!r}")
    half = 0.5 * float(angle)
    c, s = np.cos(half), np.sin(half)
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if axis == "y":
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.array([[c - 1j * s, 0.0], [0.0, c + 1j * s]], dtype=complex)


def embed_single(op: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """Lift a 2x2 operator to the full register (qubit 0 leftmost)."""
    if not 0 <= qubit < n_qubits:
        raise ValueError(f"qubit {qubit} out of range for {n_qubits} qubits")
    mats = [_EYE2] * n_qubits
    mats[qubit] = np.asarray(op, dtype=complex)
    return kron_all(mats)


def embed_cnot(control: int, target: int, n_qubits: int) -> np.ndarray:
    """Full-register CNOT between two (not necessarily adjacent) qubits."""
    if control == target:
        raise ValueError("control and target must differ")
    for q in (control, target):
        if not 0 <= q < n_qubits:
            raise ValueError(f"qubit {q} out of range for {n_qubits} qubits")
    keep = [_EYE2] * n_qubits
    keep[control] = _PROJ0
    flip = [_EYE2] * n_qubits
    flip[control] = _PROJ1
    flip[target] = pauli_matrix("X")
    return kron_all(keep) + kron_all(flip)


@dataclass(frozen=True)
class Gate:
    """A concrete gate bound to specific qubits.

    Rotations ("rx", "ry", "rz") carry an angle and act on one qubit; "cnot"
    has no angle and acts on (control, target).
    """

    name: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.name == "cnot":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError("cnot needs two distinct qubits")
            if self.angle is not None:
                raise ValueError("cnot takes no angle")
        elif self.name in ("rx", "ry", "rz"):
            if len(self.qubits) != 1:
                raise ValueError(f"{self.name} acts on exactly one qubit")
            if self.angle is None:
                raise ValueError(f"{self.name} needs an angle")
            object.__setattr__(self, "angle", float(self.angle))
        else:
            raise ValueError(f"unknown gate {self.name!r}")

    def embedded(self, n_qubits: int) -> np.ndarray:
        """Full-register unitary for this gate."""
        if self.name == "cnot":
            return embed_cnot(self.qubits[0], self.qubits[1], n_qubits)
        return embed_single(rotation_matrix(self.name[1], self.angle), self.qubits[0], n_qubits)


def apply_gate(state: StateVector | DensityMatrix, gate: Gate) -> StateVector | DensityMatrix:
    """Apply a gate to a pure state (U|psi>) or density matrix (U rho U+)."""
    u = gate.embedded(state.n_qubits)
    if isinstance(state, StateVector):
        return state.apply(u)
    if isinstance(state, DensityMatrix):
        return state.evolve(u)
    raise TypeError(f"unsupported state type {type(state).__name__}")


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive trace-preserving map on one qubit.

    The operators are 2x2 and must satisfy sum_k K_k^dagger K_k = I.
    """

    name: str
    operators: tuple[np.ndarray, ...]
    qubit: int = 0

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.operators)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (2, 2):
                raise ValueError("Kraus operators must be 2x2")
            k.setflags(write=False)
        total = sum(dagger(k) @ k for k in ops)
        if float(np.max(np.abs(total - _EYE2))) > ATOL_CHANNEL:
            raise ValueError("Kraus operators do not sum to identity")
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "qubit", int(self.qubit))

    def embedded_operators(self, n_qubits: int) -> tuple[np.ndarray, ...]:
        return tuple(embed_single(k, self.qubit, n_qubits) for k in self.operators)


def amplitude_damping(strength: float, qubit: int = 0) -> KrausChannel:
    """Amplitude-damping channel; strength is the |1> -> |0> decay probability."""
    p = float(strength)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"damping strength {p} outside [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(p)], [0.0, 0.0]], dtype=complex)
    return KrausChannel("amplitude_damping", (k0, k1), qubit)


def apply_channel(state: DensityMatrix, channel: KrausChannel) -> DensityMatrix:
    """Apply a Kraus channel; only density matrices can absorb noise."""
    if not isinstance(state, DensityMatrix):
        raise TypeError("channels act on density matrices only")
    out = np.zeros_like(state.matrix)
    for k in channel.embedded_operators(state.n_qubits):
        out = out + k @ state.matrix @ dagger(k)
    return DensityMatrix(out)


def compose_damping(p1: float, p2: float) -> float:
    """Strength of two amplitude-damping channels applied in sequence."""
    return 1.0 - (1.0 - float(p1)) * (1.0 - float(p2))


def split_damping(total: float, segments: int) -> float:
    """Per-segment strength whose `segments`-fold composition equals `total`."""
    if segments < 1:
        raise ValueError("need at least one segment")
    if not 0.0 <= total <= 1.0:
        raise ValueError(f"damping strength {total} outside [0, 1]")
    return 1.0 - (1.0 - float(total)) ** (1.0 / segments)
