"""Dense complex linear algebra for small multi-qubit systems.

Everything is plain numpy underneath; the wrapper types add the structural
checks (shape, normalization, hermiticity) the rest of the package relies on.
Qubit 0 is always the leftmost, most significant tensor factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Tolerance for state-level invariants (norms, traces, hermiticity).
ATOL_STATE = 1e-9
# Observables may be assembled from many terms; slightly looser.
ATOL_OBSERVABLE = 1e-8

PAULI_LABELS = "IXYZ"

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def pauli_matrix(label: str) -> np.ndarray:
    """Return the 2x2 matrix of a single-qubit Pauli label (I, X, Y or Z)."""
    try:
        return _PAULI[label].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli label {label!r}") from None


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conjugate(np.swapaxes(a, -1, -2))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two operators; dimensions multiply."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("kron expects 2-D operators")
    return np.kron(a, b)


def kron_all(mats) -> np.ndarray:
    """Kronecker product of a sequence; index 0 becomes the leftmost factor."""
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = kron(out, m)
    return out


def n_qubits_for_dim(dim: int) -> int:
    """Number of qubits for a Hilbert-space dimension; rejects non-powers of 2."""
    n = int(dim).bit_length() - 1
    if dim <= 0 or (1 << n) != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring of the Taylor series.

    Accurate to machine precision for the modest operator norms used here.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expm expects a square matrix")
    dim = a.shape[0]
    norm = float(np.linalg.norm(a, np.inf))
    squarings = 0
    if norm > 0.5:
        squarings = int(np.ceil(np.log2(norm / 0.5)))
        a = a / (2.0**squarings)
    out = np.eye(dim, dtype=complex)
    term = np.eye(dim, dtype=complex)
    for k in range(1, 40):
        term = term @ a / k
        out = out + term
        if np.linalg.norm(term, np.inf) <= 1e-20 * max(1.0, np.linalg.norm(out, np.inf)):
            break
    for _ in range(squarings):
        out = out @ out
    return out


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis written as a label string.

    ``PauliString("XZI")`` is X on qubit 0, Z on qubit 1, I on qubit 2.
    """

    labels: str

    def __post_init__(self):
        if not self.labels:
            raise ValueError("empty Pauli string")
        bad = set(self.labels) - set(PAULI_LABELS)
        if bad:
            raise ValueError(f"invalid Pauli labels {sorted(bad)}")

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def matrix(self) -> np.ndarray:
        return kron_all(_PAULI[c] for c in self.labels)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    """Pure state amplitudes over the computational basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be a 1-D array")
        n_qubits_for_dim(amps.shape[0])
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > ATOL_STATE:
            raise ValueError(f"state norm {norm!r} is not 1")
        object.__setattr__(self, "amplitudes", _freeze(amps))

    @property
    def n_qubits(self) -> int:
        return n_qubits_for_dim(self.amplitudes.shape[0])

    @classmethod
    def basis(cls, n_qubits: int, index: int = 0) -> "StateVector":
        """Computational basis state |index> on n_qubits."""
        if n_qubits <= 0:
            raise ValueError("need at least one qubit")
        dim = 1 << n_qubits
        if not 0 <= index < dim:
            raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        return cls.basis(n_qubits, 0)

    def apply(self, unitary: np.ndarray) -> "StateVector":
        """Return U|psi>; the constructor re-checks normalization."""
        return StateVector(np.asarray(unitary, dtype=complex) @ self.amplitudes)

    def overlap(self, other: "StateVector") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, np.conjugate(self.amplitudes)))


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state: Hermitian, unit-trace matrix over the computational basis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        n_qubits_for_dim(m.shape[0])
        herm = float(np.max(np.abs(m - dagger(m))))
        if herm > ATOL_STATE:
            raise ValueError(f"not Hermitian (residual {herm:.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > ATOL_STATE:
            raise ValueError(f"trace {tr!r} is not 1")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def n_qubits(self) -> int:
        return n_qubits_for_dim(self.matrix.shape[0])

    @classmethod
    def zero(cls, n_qubits: int) -> "DensityMatrix":
        return StateVector.zero(n_qubits).density()

    def evolve(self, unitary: np.ndarray) -> "DensityMatrix":
        """Return U rho U^dagger."""
        u = np.asarray(unitary, dtype=complex)
        return DensityMatrix(u @ self.matrix @ dagger(u))

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


def expectation(state: StateVector | DensityMatrix, observable: np.ndarray) -> float:
    """Real expectation value of a Hermitian observable."""
    obs = np.asarray(observable, dtype=complex)
    if obs.ndim != 2 or obs.shape[0] != obs.shape[1]:
        raise ValueError("observable must be square")
    if float(np.max(np.abs(obs - dagger(obs)))) > ATOL_OBSERVABLE:
        raise ValueError("observable is not Hermitian")
    if isinstance(state, StateVector):
        if obs.shape[0] != state.amplitudes.shape[0]:
            raise ValueError("observable dimension does not match state")
        value = np.vdot(state.amplitudes, obs @ state.amplitudes)
    elif isinstance(state, DensityMatrix):
        if obs.shape[0] != state.matrix.shape[0]:
            raise ValueError("observable dimension does not match state")
        value = np.trace(obs @ state.matrix)
    else:
        raise TypeError(f"unsupported state type {type(state).__name__}")
    return float(value.real)


@dataclass(frozen=True)
class StateDiagnostics:
    """Health report for a (possibly numerically drifted) density matrix."""

    trace_error: float
    hermiticity_error: float
    min_eigenvalue: float
    purity: float

    def ok(self, atol: float = 1e-10) -> bool:
        """True when trace, hermiticity and positivity hold within atol."""
        return (
            self.trace_error <= atol
            and self.hermiticity_error <= atol
            and self.min_eigenvalue >= -atol
        )


def diagnostics(state: DensityMatrix | np.ndarray) -> StateDiagnostics:
    """Measure how far a matrix is from being a valid density matrix."""
    m = state.matrix if isinstance(state, DensityMatrix) else np.asarray(state, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    herm = float(np.max(np.abs(m - dagger(m))))
    trace_error = abs(complex(np.trace(m)) - 1.0)
    # Eigenvalues of the Hermitian part; for a healthy state this is m itself.
    sym = (m + dagger(m)) / 2.0
    eigs = np.linalg.eigvalsh(sym)
    purity = float(np.trace(m @ m).real)
    return StateDiagnostics(float(trace_error), herm, float(eigs[0]), purity)
