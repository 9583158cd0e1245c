"""Assemble the full analysis into a report and render it."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Any, Optional

from .analysis import (
    SATURATION_CAVEAT,
    DistinguishabilityMatrix,
    EntropyReport,
    distinguishability,
    effective_environment_entropy,
    entropy_report,
)
from .circuits import CircuitPair, MatchingReport, validate_matching
from .matching import MatchResult, match_pair
from .simulation import PairTrace, simulate_pair
from .witness import WitnessConfig, WitnessResult, run_witness

SIGNIFICANT_DIGITS = 12
DISPLAY_DECIMALS = 4
TABLE_HEADER = "Branch Pair | Final Step | Accumulated"
OVERLAP_CONVENTION = "amplitude overlap exp(-gamma*D/2), zero phase"
FULL_UNITARY_NOTE = (
    "full-unitary coupling entangles the ancilla with data superpositions; "
    "shallow purity below 1 does not indicate branching"
)


@dataclass(frozen=True, eq=False)
class AnalysisReport:
    pair: CircuitPair
    matching: MatchingReport
    match: Optional[MatchResult]
    trace: PairTrace
    deep_d: DistinguishabilityMatrix
    shallow_d: DistinguishabilityMatrix
    entropy: EntropyReport
    gamma: float
    effective_entropy_bits: tuple[float, ...]
    witness: WitnessResult


def analyze(
    pair: CircuitPair,
    gamma: float = 0.17,
    witness_config: WitnessConfig = WitnessConfig(),
    match: bool = True,
) -> AnalysisReport:
    """Run match (optional), simulate, distinguishability, entropy, and witness."""
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma!r}")
    matching = validate_matching(pair)
    result = None
    if match:
        pair, result = match_pair(pair)
    trace = simulate_pair(pair)
    deep_d = distinguishability(trace)
    shallow_d = distinguishability(trace, shallow=True)
    entropy = entropy_report(pair.m, pair.n, pair.t_steps, deep_d)
    effective = tuple(
        effective_environment_entropy(pair.control_amplitudes, deep_d, gamma, t)
        for t in range(1, pair.t_steps + 1)
    )
    witness = run_witness(pair, witness_config, trace)
    return AnalysisReport(
        pair, matching, result, trace, deep_d, shallow_d, entropy, gamma, effective, witness
    )


# -- machine-readable ----------------------------------------------------------


def _num(x: Optional[float]) -> Optional[float]:
    if x is None:
        return None
    return float(f"{float(x):.{SIGNIFICANT_DIGITS}g}")


def distinguishability_rows(D: DistinguishabilityMatrix) -> list[dict[str, Any]]:
    return [
        {
            "pair": [i, j],
            "final": _num(D.per_step[-1][i, j]),
            "accumulated": _num(D.accumulated[i, j]),
        }
        for i, j in D.pairs()
    ]


def witness_section(w: WitnessResult) -> dict[str, Any]:
    out: dict[str, Any] = {
        "model": w.model,
        "phi": _num(w.phi),
        "branch_phases": [_num(p) for p in w.branch_phases],
        "purity_deep": _num(w.purity_deep),
        "purity_shallow": _num(w.purity_shallow),
        "phi_threshold": _num(w.phi_threshold),
        "observable": w.observable,
    }
    if w.model == "full_unitary":
        out["note"] = FULL_UNITARY_NOTE
    return out


def match_section(pair: CircuitPair, result: Optional[MatchResult], trace: PairTrace) -> dict[str, Any]:
    steer = pair.steering_gate
    out: dict[str, Any] = {
        "per_branch": [_num(p) for p in trace.per_branch_p_halt],
        "deep": _num(trace.p_halt_deep),
        "shallow": _num(trace.p_halt_shallow),
        "theta": _num(steer.angle) if steer.kind == "RY" else None,
        "solved": result is not None,
    }
    if result is not None:
        out["theta"] = _num(result.theta)
        out["method"] = result.method
        out["residual"] = _num(result.residual)
        out["iterations"] = result.iterations
    return out


def report_to_dict(report: AnalysisReport) -> dict[str, Any]:
    pair, matching, ent = report.pair, report.matching, report.entropy
    return {
        "pair": {
            "m": pair.m,
            "n": pair.n,
            "t_steps": pair.t_steps,
            "matched": matching.matched,
            "mismatched_branches": list(matching.mismatched_branches),
            "shallow_profile": asdict(matching.shallow_profile),
        },
        "halting": match_section(pair, report.match, report.trace),
        "distinguishability": {
            "deep": distinguishability_rows(report.deep_d),
            "shallow_max": _num(float(report.shallow_d.accumulated.max())),
        },
        "entropy": {
            "bound_shallow_bits": _num(ent.bound_shallow_bits),
            "bound_deep_bits": _num(ent.bound_deep_bits),
            "bound_label": SATURATION_CAVEAT,
            "l_d": _num(ent.l_d),
            "l_d_asymptotic": _num(ent.l_d_asymptotic),
            "gamma_min": _num(ent.gamma_min),
            "gamma": _num(report.gamma),
            "overlap_convention": OVERLAP_CONVENTION,
            "effective_entropy_bits": [_num(s) for s in report.effective_entropy_bits],
        },
        "witness": witness_section(report.witness),
    }


def dumps(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# -- human-readable --------------------------------------------------------------


def _fmt(x: Optional[float]) -> str:
    if x is None:
        return "n/a"
    return str(round(float(x), DISPLAY_DECIMALS) + 0.0)


def render_table(D: DistinguishabilityMatrix) -> str:
    lines = [TABLE_HEADER]
    for i, j in D.pairs():
        lines.append(f"({i},{j}) | {_fmt(D.per_step[-1][i, j])} | {_fmt(D.accumulated[i, j])}")
    return "\n".join(lines) + "\n"


def render_witness(w: WitnessResult) -> str:
    threshold = "unobservable at any coupling" if w.phi_threshold is None else _fmt(w.phi_threshold)
    lines = [
        f"  model:           {w.model}",
        f"  phi:             {_fmt(w.phi)} rad",
        f"  branch phases:   {', '.join(_fmt(p) for p in w.branch_phases)}",
        f"  purity deep:     {_fmt(w.purity_deep)}",
        f"  purity shallow:  {_fmt(w.purity_shallow)}",
        f"  phi threshold:   {threshold}",
        f"  observable:      {'yes' if w.observable else 'no'}",
    ]
    if w.model == "full_unitary":
        lines.append(f"  note: {FULL_UNITARY_NOTE}")
    return "\n".join(lines) + "\n"


def render_match(pair: CircuitPair, result: Optional[MatchResult], trace: PairTrace) -> str:
    per_branch = ", ".join(_fmt(p) for p in trace.per_branch_p_halt)
    lines = [
        f"  per-branch P_halt: {per_branch}",
        f"  deep P_halt:       {_fmt(trace.p_halt_deep)}",
        f"  shallow P_halt:    {_fmt(trace.p_halt_shallow)}",
    ]
    steer = pair.steering_gate
    if steer.kind == "RY":
        lines.append(f"  steering theta:    {_fmt(steer.angle)} rad")
    if result is None:
        lines.append("  steering:          not solved (--no-match)")
    else:
        lines.append(
            f"  steering:          {result.method}, residual {result.residual:.3e}, "
            f"{result.iterations} iterations"
        )
    return "\n".join(lines) + "\n"


def render_report(report: AnalysisReport) -> str:
    pair, ent = report.pair, report.entropy
    verdict = "matched" if report.matching.matched else (
        "MISMATCHED (branches " + ", ".join(map(str, report.matching.mismatched_branches)) + ")"
    )
    gamma_min = "unobservable at any coupling" if ent.gamma_min is None else _fmt(ent.gamma_min)
    effective = ", ".join(_fmt(s) for s in report.effective_entropy_bits)
    parts = [
        "Circuit pair",
        f"  m={pair.m} n={pair.n} T={pair.t_steps}  complexity profiles: {verdict}",
        "",
        "Halting",
        render_match(pair, report.match, report.trace),
        "Branch distinguishability (deep)",
        render_table(report.deep_d),
        f"Shallow path: max accumulated D' = {_fmt(float(report.shallow_d.accumulated.max()))}",
        "",
        f"Entropy ({SATURATION_CAVEAT})",
        f"  deep bound:      {_fmt(ent.bound_deep_bits)} bits",
        f"  shallow bound:   {_fmt(ent.bound_shallow_bits)} bits",
        f"  L_d:             {_fmt(ent.l_d)}",
        f"  L_d asymptotic:  {_fmt(ent.l_d_asymptotic)}",
        f"  gamma_min:       {gamma_min}",
        f"  effective S_E at gamma={_fmt(report.gamma)} per step ({OVERLAP_CONVENTION}): {effective} bits",
        "",
        "Witness",
        render_witness(report.witness),
    ]
    return "\n".join(parts)
