"""Branch distinguishability, environmental overlaps, and entropy bounds.

The bath is represented only through the overlap model
``|<E_i|E_j>|^2 = exp(-gamma * D_ij)``; ``gamma`` is the single effective
dephasing strength. Entropies are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, NumericalDegeneracyError
from .simulation import BranchTrace, PairTrace
from .statevector import STATE_TOL, shannon_bits

SATURATION_CAVEAT = "upper bound (saturation assumed)"


@dataclass(frozen=True, eq=False)
class DistinguishabilityMatrix:
    """``per_step[t]`` is D^(t+1); ``accumulated`` is the sum over all steps."""

    per_step: np.ndarray
    accumulated: np.ndarray

    @property
    def num_branches(self) -> int:
        return self.accumulated.shape[0]

    @property
    def t_steps(self) -> int:
        return self.per_step.shape[0]

    def accumulated_through(self, t: int) -> np.ndarray:
        """Sum of D^(1) .. D^(t)."""
        if not 1 <= t <= self.t_steps:
            raise ValueError(f"step {t} outside 1..{self.t_steps}")
        return self.per_step[:t].sum(axis=0)

    def pairs(self) -> list[tuple[int, int]]:
        b = self.num_branches
        return [(i, j) for i in range(b) for j in range(i + 1, b)]

    def min_accumulated(self) -> float:
        """Smallest off-diagonal accumulated entry (inf for a single branch)."""
        vals = [self.accumulated[i, j] for i, j in self.pairs()]
        return float(min(vals)) if vals else math.inf


@dataclass(frozen=True)
class EntropyReport:
    bound_shallow_bits: float
    bound_deep_bits: float
    l_d: float
    l_d_asymptotic: float
    gamma_min: Optional[float] = None


def distinguishability_from_traces(traces: Sequence[BranchTrace]) -> DistinguishabilityMatrix:
    z = np.stack([tr.z_expectations for tr in traces])  # (branches, T, n)
    diff = z[:, None, :, :] - z[None, :, :, :]
    per_step = np.einsum("ijtk,ijtk->tij", diff, diff)
    per_step.setflags(write=False)
    acc = per_step.sum(axis=0)
    acc.setflags(write=False)
    return DistinguishabilityMatrix(per_step, acc)


def distinguishability(pair_trace: PairTrace, shallow: bool = False) -> DistinguishabilityMatrix:
    """D_ij^(t) = sum_k (<Z_k>_i - <Z_k>_j)^2 for every step.

    With ``shallow=True`` every branch shares the single shallow trace, so
    the result is identically zero.
    """
    if shallow:
        traces = [pair_trace.shallow] * len(pair_trace.deep)
    else:
        traces = list(pair_trace.deep)
    return distinguishability_from_traces(traces)


def overlap_model(D: float, gamma: float) -> float:
    """Squared environmental overlap ``exp(-gamma * D)``."""
    if D < 0 or gamma < 0:
        raise ValueError(f"D and gamma must be non-negative, got D={D!r}, gamma={gamma!r}")
    return math.exp(-gamma * D)


def observability_threshold(D: DistinguishabilityMatrix) -> Optional[float]:
    """Minimal dephasing strength ``1 / min_ij sum_t D_ij``.

    Returns ``None`` when the minimum is zero (in particular for the shallow
    path): no coupling strength resolves that pair.
    """
    if D.num_branches < 2:
        raise ValueError("observability needs at least two branches")
    d_min = D.min_accumulated()
    if d_min <= 0.0:
        return None
    return 1.0 / d_min


def entropy_bounds(m: int, n: int, t_steps: int) -> EntropyReport:
    """Upper bounds on cumulative environmental entropy, in bits.

    Both include one bit for the final halting operation.
    """
    for name, v in (("m", m), ("n", n), ("t_steps", t_steps)):
        if not isinstance(v, (int, np.integer)) or v < 1:
            raise ConfigurationError(f"{name} must be a positive integer, got {v!r}")
    shallow = t_steps * n + 1
    deep = t_steps * (m + n) + 1
    return EntropyReport(
        bound_shallow_bits=float(shallow),
        bound_deep_bits=float(deep),
        l_d=deep / shallow,
        l_d_asymptotic=1.0 + m / (n + 1.0 / t_steps),
    )


def entropy_report(m: int, n: int, t_steps: int, D: DistinguishabilityMatrix) -> EntropyReport:
    bounds = entropy_bounds(m, n, t_steps)
    return EntropyReport(
        bound_shallow_bits=bounds.bound_shallow_bits,
        bound_deep_bits=bounds.bound_deep_bits,
        l_d=bounds.l_d,
        l_d_asymptotic=bounds.l_d_asymptotic,
        gamma_min=observability_threshold(D),
    )


def environment_matrix(
    alphas: Sequence[complex], D: DistinguishabilityMatrix, gamma: float, t: int
) -> np.ndarray:
    """``A_ij = alpha_i conj(alpha_j) exp(-gamma D_ij^(<=t) / 2)``.

    Amplitude overlaps take the positive real root of the squared-overlap
    model; their phases are not modeled.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma!r}")
    a = np.asarray(alphas, dtype=complex)
    if a.shape[0] != D.num_branches:
        raise ValueError(f"{a.shape[0]} amplitudes for {D.num_branches} branches")
    gram = np.exp(-gamma * D.accumulated_through(t) / 2.0)
    return np.outer(a, a.conj()) * gram


def effective_environment_entropy(
    alphas: Sequence[complex], D: DistinguishabilityMatrix, gamma: float, t: int
) -> float:
    """Entropy (bits) of the modeled environment state after ``t`` steps."""
    A = environment_matrix(alphas, D, gamma, t)
    vals = np.linalg.eigvalsh((A + A.conj().T) / 2)
    if vals.min() < -STATE_TOL:
        raise NumericalDegeneracyError(
            f"environment overlap matrix has eigenvalue {vals.min():.3e} < 0"
        )
    vals = np.clip(vals, 0.0, None)
    return shannon_bits(vals / vals.sum())
