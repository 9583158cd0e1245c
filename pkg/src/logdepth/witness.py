"""Ancilla witness: branch-dependent phase on a never-reset probe qubit.

The ancilla starts in ``(|0> + |1>)/sqrt(2)`` so that phase kicks show up
as relative phase. Two models are available:

``semiclassical`` (default)
    After every step the ancilla's ``|1>`` component picks up
    ``phi * sum_k <Z_k>`` for the branch being run. Identical branches give
    identical phases, so the shallow purity is exactly 1.

``full_unitary``
    The joint control, data, and ancilla register is evolved with a
    ``CPHASE(phi)`` from every data qubit to the ancilla after each step.
    The ancilla then also entangles with data superpositions, so the shallow
    purity usually drops below 1 as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analysis import DistinguishabilityMatrix, distinguishability
from .circuits import BranchProgram, CircuitPair
from .errors import ConfigurationError
from .simulation import BranchTrace, PairTrace, simulate_pair
from .statevector import (
    MAX_QUBITS,
    GateOp,
    PureState,
    apply_to_amplitudes,
    purity,
    reduced_density,
)

MODELS = ("semiclassical", "full_unitary")


@dataclass(frozen=True)
class WitnessConfig:
    phi: float = 0.5
    model: str = "semiclassical"

    def __post_init__(self) -> None:
        if not math.isfinite(self.phi) or self.phi < 0:
            raise ValueError(f"phi must be finite and non-negative, got {self.phi!r}")
        model = self.model.replace("-", "_")
        if model not in MODELS:
            raise ValueError(f"unknown witness model {self.model!r}; expected one of {MODELS}")
        object.__setattr__(self, "model", model)


@dataclass(frozen=True)
class WitnessResult:
    model: str
    phi: float
    branch_phases: tuple[float, ...]
    purity_deep: float
    purity_shallow: float
    phi_threshold: Optional[float]
    observable: bool


def branch_phase(trace: BranchTrace, phi: float) -> float:
    """Total ancilla phase ``phi * sum_t sum_k <Z_k>`` accumulated by one branch."""
    return phi * math.fsum(trace.z_expectations.ravel())


def witness_purity_semiclassical(phases: Sequence[float], alphas: Sequence[complex]) -> float:
    """Purity of ``sum_i |alpha_i|^2 |anc_i><anc_i|`` with ``|anc_i> = (|0> + e^{i Phi_i}|1>)/sqrt(2)``.

    Closed form: ``sum_ij w_i w_j cos^2((Phi_i - Phi_j) / 2)``.
    """
    if len(phases) != len(alphas):
        raise ValueError(f"{len(phases)} phases for {len(alphas)} amplitudes")
    a = np.asarray(alphas, dtype=complex)
    w = a.real**2 + a.imag**2
    p = np.asarray(phases, dtype=float)
    overlap = np.cos((p[:, None] - p[None, :]) / 2) ** 2
    return float(w @ overlap @ w)


def witness_threshold(D: DistinguishabilityMatrix) -> Optional[float]:
    """Coupling angle ``1/sqrt(min_ij sum_t D_ij)``; ``None`` if some pair never separates."""
    d_min = D.min_accumulated()
    if not d_min > 0.0:
        return None
    return 1.0 / math.sqrt(d_min)


def _ancilla_purity_full(
    programs: Sequence[BranchProgram], alphas: Sequence[complex], n: int, phi: float
) -> float:
    m_qubits = int(round(math.log2(len(programs))))
    total = m_qubits + n + 1
    if total > MAX_QUBITS:
        raise ConfigurationError(f"full-unitary witness needs {total} qubits (max {MAX_QUBITS})")
    ancilla = n
    rows = np.zeros((len(programs), 2 ** (n + 1)), dtype=complex)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    rows[:, 0] = np.asarray(alphas, dtype=complex) * inv_sqrt2
    rows[:, 1] = np.asarray(alphas, dtype=complex) * inv_sqrt2
    couplings = [GateOp("CPHASE", (k, ancilla), phi) for k in range(n)]
    t_steps = len(programs[0])
    for t in range(t_steps):
        for i, program in enumerate(programs):
            row = apply_to_amplitudes(rows[i], n + 1, program.steps[t])
            for gate in couplings:
                row = apply_to_amplitudes(row, n + 1, gate)
            rows[i] = row
    joint = PureState(total, rows.reshape(-1))
    return purity(reduced_density(joint, [total - 1]))


def run_witness(
    pair: CircuitPair, config: WitnessConfig, trace: Optional[PairTrace] = None
) -> WitnessResult:
    if config.model == "full_unitary" and pair.m + pair.n + 1 > MAX_QUBITS:
        raise ConfigurationError(
            f"full-unitary witness needs {pair.m + pair.n + 1} qubits (max {MAX_QUBITS})"
        )
    trace = trace if trace is not None else simulate_pair(pair)
    D = distinguishability(trace)
    threshold = witness_threshold(D)
    observable = config.phi**2 * D.min_accumulated() >= 1.0 if threshold is not None else False

    phases = tuple(branch_phase(tr, config.phi) for tr in trace.deep)
    if config.model == "semiclassical":
        shallow_phase = branch_phase(trace.shallow, config.phi)
        p_deep = witness_purity_semiclassical(phases, pair.control_amplitudes)
        p_shallow = witness_purity_semiclassical(
            [shallow_phase] * pair.num_branches, pair.control_amplitudes
        )
    else:
        p_deep = _ancilla_purity_full(pair.deep_branches, pair.control_amplitudes, pair.n, config.phi)
        p_shallow = _ancilla_purity_full(
            [pair.shallow_program] * pair.num_branches, pair.control_amplitudes, pair.n, config.phi
        )
    return WitnessResult(
        model=config.model,
        phi=config.phi,
        branch_phases=phases,
        purity_deep=p_deep,
        purity_shallow=p_shallow,
        phi_threshold=threshold,
        observable=bool(observable),
    )
