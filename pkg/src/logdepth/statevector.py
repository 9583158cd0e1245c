"""Exact pure-state simulation of small qubit registers.

Basis ordering follows ket notation literally: qubit 0 is the most
significant bit, so ``|q0 q1 q2>`` has index ``q0*4 + q1*2 + q2``.
Entropies are reported in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConfigurationError

MAX_QUBITS = 24
STATE_TOL = 1e-10
EIG_CUTOFF = 1e-12

SINGLE_QUBIT_GATES = frozenset({"H", "X", "Z", "RZ", "RY"})
TWO_QUBIT_GATES = frozenset({"CNOT", "CPHASE"})
PARAMETRIC_GATES = frozenset({"RZ", "RY", "CPHASE"})
GATE_KINDS = SINGLE_QUBIT_GATES | TWO_QUBIT_GATES

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class GateOp:
    """A symbolic gate acting on one or two qubits.

    For two-qubit gates ``targets`` is ``(control, target)``.
    """

    kind: str
    targets: tuple[int, ...]
    angle: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        targets = tuple(int(q) for q in self.targets)
        object.__setattr__(self, "targets", targets)
        arity = 2 if self.kind in TWO_QUBIT_GATES else 1
        if len(targets) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubit index(es), got {len(targets)}")
        if len(set(targets)) != len(targets):
            raise ValueError(f"{self.kind} qubit indices must be distinct: {targets}")
        if any(q < 0 for q in targets):
            raise ValueError(f"negative qubit index in {targets}")
        if self.kind in PARAMETRIC_GATES:
            if self.angle is None:
                raise ValueError(f"{self.kind} requires an angle")
            angle = float(self.angle)
            if not math.isfinite(angle):
                raise ValueError(f"{self.kind} angle must be finite, got {angle}")
            object.__setattr__(self, "angle", angle)
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")

    @property
    def arity(self) -> int:
        return len(self.targets)

    def matrix(self) -> np.ndarray:
        """Local unitary (2x2, or 4x4 over ``(control, target)``)."""
        k = self.kind
        if k == "H":
            return np.array([[1, 1], [1, -1]], dtype=complex) * _INV_SQRT2
        if k == "X":
            return np.array([[0, 1], [1, 0]], dtype=complex)
        if k == "Z":
            return np.array([[1, 0], [0, -1]], dtype=complex)
        if k == "RZ":
            half = self.angle / 2
            return np.array([[np.exp(-1j * half), 0], [0, np.exp(1j * half)]], dtype=complex)
        if k == "RY":
            c, s = math.cos(self.angle / 2), math.sin(self.angle / 2)
            return np.array([[c, -s], [s, c]], dtype=complex)
        if k == "CNOT":
            return np.array(
                [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
            )
        # CPHASE
        return np.diag([1, 1, 1, np.exp(1j * self.angle)]).astype(complex)

    def __str__(self) -> str:
        qubits = ",".join(str(q) for q in self.targets)
        if self.angle is None:
            return f"{self.kind}({qubits})"
        return f"{self.kind}[{self.angle:.6g}]({qubits})"


def _check_register(num_qubits: int) -> None:
    if not isinstance(num_qubits, (int, np.integer)) or not 1 <= num_qubits <= MAX_QUBITS:
        raise ConfigurationError(
            f"register size must be an integer in [1, {MAX_QUBITS}], got {num_qubits!r}"
        )


@dataclass(frozen=True, eq=False)
class PureState:
    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        _check_register(self.num_qubits)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != 2**self.num_qubits:
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes for {self.num_qubits} qubits, "
                f"got {amps.shape[0]}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > STATE_TOL:
            raise ValueError(f"state is not normalized (squared norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.num_qubits

    def probabilities(self) -> np.ndarray:
        return self.amplitudes.real**2 + self.amplitudes.imag**2

    def allclose(self, other: "PureState", atol: float = STATE_TOL, up_to_phase: bool = False) -> bool:
        if self.num_qubits != other.num_qubits:
            return False
        a, b = self.amplitudes, other.amplitudes
        if up_to_phase:
            overlap = np.vdot(a, b)
            if abs(overlap) < 1e-15:
                return False
            b = b * (abs(overlap) / overlap)
        return bool(np.allclose(a, b, atol=atol, rtol=0))

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex]) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex)
        n = int(round(math.log2(amps.size))) if amps.size else 0
        return cls(n, amps)

    @classmethod
    def from_kets(cls, terms: dict[str, complex]) -> "PureState":
        """Build a state from ``{"010": amp, ...}``; bit strings are ``q0 q1 ...``."""
        n = len(next(iter(terms)))
        amps = np.zeros(2**n, dtype=complex)
        for bits, amp in terms.items():
            if len(bits) != n:
                raise ValueError("all kets must have the same length")
            amps[int(bits, 2)] += amp
        return cls(n, amps)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        rho = np.asarray(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {rho.shape}")
        if not np.allclose(rho, rho.conj().T, atol=STATE_TOL, rtol=0):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > STATE_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        if np.linalg.eigvalsh(rho).min() < -STATE_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_state(cls, state: PureState) -> "DensityMatrix":
        a = state.amplitudes
        return cls(np.outer(a, a.conj()))


def zero_state(num_qubits: int) -> PureState:
    """Return ``|0...0>`` on ``num_qubits`` qubits."""
    _check_register(num_qubits)
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[0] = 1.0
    return PureState(num_qubits, amps)


def _check_qubit(qubit: int, num_qubits: int) -> None:
    if not 0 <= qubit < num_qubits:
        raise IndexError(f"qubit index {qubit} out of range for {num_qubits}-qubit register")


def apply_to_amplitudes(amps: np.ndarray, num_qubits: int, gate: GateOp) -> np.ndarray:
    """Apply ``gate`` to a raw amplitude vector and return a new vector.

    The vector need not be normalized; callers working with sub-normalized
    blocks (one control branch of a joint register) rely on this.
    """
    for q in gate.targets:
        _check_qubit(q, num_qubits)
    u = gate.matrix()
    if gate.arity == 1:
        (q,) = gate.targets
        view = np.asarray(amps, dtype=complex).reshape(2**q, 2, 2 ** (num_qubits - q - 1))
        a0, a1 = view[:, 0, :], view[:, 1, :]
        out = np.empty_like(view)
        out[:, 0, :] = u[0, 0] * a0 + u[0, 1] * a1
        out[:, 1, :] = u[1, 0] * a0 + u[1, 1] * a1
        return out.reshape(-1)

    c, t = gate.targets
    tensor = np.asarray(amps, dtype=complex).reshape((2,) * num_qubits)
    tensor = np.moveaxis(tensor, (c, t), (0, 1))
    rest = tensor.shape[2:]
    local = tensor.reshape(4, -1)
    if gate.kind == "CNOT":
        local = local[[0, 1, 3, 2]]
    else:
        local = local.copy()
        local[3] *= u[3, 3]
    tensor = np.moveaxis(local.reshape((2, 2) + rest), (0, 1), (c, t))
    return np.ascontiguousarray(tensor).reshape(-1)


def apply_gate(state: PureState, gate: GateOp) -> PureState:
    return PureState(state.num_qubits, apply_to_amplitudes(state.amplitudes, state.num_qubits, gate))


def apply_gates(state: PureState, gates: Iterable[GateOp]) -> PureState:
    for gate in gates:
        state = apply_gate(state, gate)
    return state


def _bit_split(state: PureState, qubit: int) -> tuple[float, float]:
    _check_qubit(qubit, state.num_qubits)
    n = state.num_qubits
    probs = state.probabilities().reshape(2**qubit, 2, 2 ** (n - qubit - 1))
    return math.fsum(probs[:, 0, :].ravel()), math.fsum(probs[:, 1, :].ravel())


def expectation_z(state: PureState, qubit: int) -> float:
    """<Z_qubit>, normalized by the state's own squared norm.

    Dividing by ``p0 + p1`` removes the last-ulp norm drift that ``1/sqrt(2)``
    factors introduce, so equal-weight superpositions give exact 0 or +-1.
    """
    p0, p1 = _bit_split(state, qubit)
    return (p0 - p1) / (p0 + p1)


def z_expectations(state: PureState) -> np.ndarray:
    return np.array([expectation_z(state, k) for k in range(state.num_qubits)])


def projector_probability(state: PureState, qubit: int, value: int) -> float:
    """Probability that ``qubit`` reads ``value`` (``<psi|P|psi>``)."""
    if value not in (0, 1):
        raise ValueError(f"projector value must be 0 or 1, got {value!r}")
    p0, p1 = _bit_split(state, qubit)
    return (p0 if value == 0 else p1) / (p0 + p1)


def reduced_density(state: PureState, keep: Iterable[int]) -> DensityMatrix:
    """Partial trace onto the qubits in ``keep`` (kept in ascending order)."""
    kept = sorted(set(int(q) for q in keep))
    if not kept:
        raise ValueError("keep set must be non-empty")
    n = state.num_qubits
    for q in kept:
        _check_qubit(q, n)
    traced = [q for q in range(n) if q not in kept]
    tensor = state.amplitudes.reshape((2,) * n).transpose(kept + traced)
    mat = tensor.reshape(2 ** len(kept), -1)
    rho = mat @ mat.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.trace(rho).real)


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2)."""
    e = rho.entries
    return float(np.sum(e.real**2 + e.imag**2))


def eigenvalues(rho: DensityMatrix) -> np.ndarray:
    """Eigenvalues with round-off negatives in [-1e-10, 0) clamped to zero."""
    vals = np.linalg.eigvalsh(rho.entries)
    return np.where((vals < 0) & (vals >= -STATE_TOL), 0.0, vals)


def shannon_bits(weights: Iterable[float]) -> float:
    """Shannon entropy in bits; weights below 1e-12 contribute nothing."""
    w = np.asarray(list(weights), dtype=float)
    w = w[w > EIG_CUTOFF]
    return float(max(0.0, -np.sum(w * np.log2(w))))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) = -Tr(rho log rho), in bits."""
    return shannon_bits(eigenvalues(rho))
