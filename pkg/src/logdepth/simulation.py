"""Per-branch evolution of deep and shallow circuits.

The control register is never simulated here. The deep step unitary is
block diagonal in the control basis, so each branch evolves independently
on the data register and is weighted by ``|alpha_i|^2`` afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import BranchProgram, CircuitPair
from .statevector import PureState, apply_gate, projector_probability, z_expectations, zero_state


@dataclass(frozen=True, eq=False)
class BranchTrace:
    """States ``states[0..T]`` and post-gate ``<Z_k>`` rows ``z_expectations[0..T-1]``."""

    branch_index: int
    states: tuple[PureState, ...]
    z_expectations: np.ndarray

    @property
    def final_state(self) -> PureState:
        return self.states[-1]

    @property
    def t_steps(self) -> int:
        return len(self.states) - 1


@dataclass(frozen=True, eq=False)
class PairTrace:
    deep: tuple[BranchTrace, ...]
    shallow: BranchTrace
    p_halt_deep: float
    p_halt_shallow: float
    per_branch_p_halt: tuple[float, ...]
    weights: np.ndarray

    @property
    def halting_gap(self) -> float:
        return abs(self.p_halt_deep - self.p_halt_shallow)


def run_branch(program: BranchProgram, n: int, branch_index: int = 0) -> BranchTrace:
    state = zero_state(n)
    states = [state]
    rows = []
    for gate in program.steps:
        state = apply_gate(state, gate)
        states.append(state)
        rows.append(z_expectations(state))
    z = np.array(rows, dtype=float).reshape(len(rows), n)
    z.setflags(write=False)
    return BranchTrace(branch_index, tuple(states), z)


def _weighted_sum(weights: np.ndarray, values) -> float:
    # Amplitude normalization is only exact to ~1 ulp; keep the result a probability.
    total = float(np.dot(weights, np.asarray(values, dtype=float)))
    return min(1.0, max(0.0, total))


def shallow_halting_probability(pair: CircuitPair, final_state: PureState) -> float:
    weights = pair.weights
    probs = [
        projector_probability(final_state, pair.projector(i).qubit, pair.projector(i).value)
        for i in range(pair.num_branches)
    ]
    return _weighted_sum(weights, probs)


def simulate_pair(pair: CircuitPair) -> PairTrace:
    deep = tuple(run_branch(b, pair.n, i) for i, b in enumerate(pair.deep_branches))
    shallow = run_branch(pair.shallow_program, pair.n)
    per_branch = tuple(
        projector_probability(tr.final_state, pair.projector(i).qubit, pair.projector(i).value)
        for i, tr in enumerate(deep)
    )
    weights = pair.weights
    return PairTrace(
        deep=deep,
        shallow=shallow,
        p_halt_deep=_weighted_sum(weights, per_branch),
        p_halt_shallow=shallow_halting_probability(pair, shallow.final_state),
        per_branch_p_halt=per_branch,
        weights=weights,
    )
