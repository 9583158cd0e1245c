"""Solve the shallow steering angle so both architectures halt equally often."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import CircuitPair
from .errors import InfeasibleMatchError
from .simulation import shallow_halting_probability, simulate_pair
from .statevector import GateOp, PureState, apply_gate, apply_gates, projector_probability, zero_state

THETA_TOL = 1e-12
MAX_ITERATIONS = 200
SCAN_POINTS = 257


@dataclass(frozen=True)
class MatchResult:
    theta: float
    achieved_p: float
    target_p: float
    residual: float
    iterations: int
    method: str = "bisection"


def solve_ry_closed_form(target_p: float) -> float:
    """Angle with ``cos^2(theta/2) = target_p``."""
    if not 0.0 <= target_p <= 1.0:
        raise ValueError(f"target probability must lie in [0, 1], got {target_p!r}")
    return 2.0 * math.acos(math.sqrt(target_p))


class _ShallowObjective:
    """``p_shallow(theta)`` with the pre-steering state cached."""

    def __init__(self, pair: CircuitPair) -> None:
        steer = pair.steering_gate
        if steer.kind != "RY":
            raise ValueError(f"final shallow step is {steer.kind}, not a steerable RY")
        self.pair = pair
        self.steer = steer
        self.pre_state: PureState = apply_gates(zero_state(pair.n), pair.shallow_program.steps[:-1])
        self.evaluations = 0

    def __call__(self, theta: float) -> float:
        self.evaluations += 1
        gate = GateOp("RY", self.steer.targets, theta)
        return shallow_halting_probability(self.pair, apply_gate(self.pre_state, gate))

    def closed_form_applies(self) -> bool:
        # RY acts on the halting qubit, which the projector fully accepts beforehand.
        if not self.pair.uniform_halting:
            return False
        proj = self.pair.projector(0)
        if self.steer.targets[0] != proj.qubit:
            return False
        return abs(projector_probability(self.pre_state, proj.qubit, proj.value) - 1.0) < 1e-12

    def achievable_range(self) -> tuple[float, float]:
        # p(theta) = a + b cos(theta) + c sin(theta) for any projector mixture.
        p0, p_half, p_pi = self(0.0), self(math.pi / 2), self(math.pi)
        a, b = (p0 + p_pi) / 2, (p0 - p_pi) / 2
        c = p_half - a
        candidates = [p0, p_pi]
        crit = math.atan2(c, b)
        for theta in (crit, crit + math.pi, crit - math.pi):
            if 0.0 <= theta <= math.pi:
                candidates.append(a + b * math.cos(theta) + c * math.sin(theta))
        return min(candidates), max(candidates)


def _bisect(f, lo: float, hi: float, f_lo: float) -> tuple[float, int]:
    iterations = 0
    while hi - lo > THETA_TOL and iterations < MAX_ITERATIONS:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        iterations += 1
        if f_mid == 0.0:
            return mid, iterations
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi), iterations


def solve_steering(pair: CircuitPair, tol: float = 1e-9) -> MatchResult:
    """Find the smallest ``theta`` in [0, pi] with ``|p_shallow - p_deep| <= tol``.

    Uses the closed form when the steering RY sits on a halting qubit that
    is fully accepted before rotation; otherwise scans [0, pi] for the first
    sign change and bisects it. Either way the answer is re-simulated.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    target = simulate_pair(pair).p_halt_deep
    objective = _ShallowObjective(pair)

    if objective.closed_form_applies():
        theta = solve_ry_closed_form(min(1.0, max(0.0, target)))
        achieved = objective(theta)
        if abs(achieved - target) <= tol:
            return MatchResult(theta, achieved, target, abs(achieved - target), 0, "closed-form")

    def f(theta: float) -> float:
        return objective(theta) - target

    grid = np.linspace(0.0, math.pi, SCAN_POINTS)
    values = [f(float(x)) for x in grid]
    for k, (x, fx) in enumerate(zip(grid, values)):
        if abs(fx) <= tol:
            theta, iterations = float(x), 0
            # Refine toward the exact crossing if one lies in the next cell.
            if fx != 0.0 and k + 1 < len(grid) and (values[k + 1] < 0) != (fx < 0):
                theta, iterations = _bisect(f, float(x), float(grid[k + 1]), fx)
            break
        if k + 1 < len(grid) and (values[k + 1] < 0) != (fx < 0) and abs(values[k + 1]) > tol:
            theta, iterations = _bisect(f, float(x), float(grid[k + 1]), fx)
            break
    else:
        raise InfeasibleMatchError(target, objective.achievable_range())

    achieved = objective(theta)
    residual = abs(achieved - target)
    if residual > tol:
        raise InfeasibleMatchError(target, objective.achievable_range())
    return MatchResult(theta, achieved, target, residual, iterations)


def match_pair(pair: CircuitPair, tol: float = 1e-9) -> tuple[CircuitPair, MatchResult]:
    """Solve the steering angle and return the updated pair alongside the result."""
    result = solve_steering(pair, tol)
    return pair.with_steering_angle(result.theta), result
