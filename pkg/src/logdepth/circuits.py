"""Deep/shallow circuit pairs: representation, documents, and generation.

A document is a JSON object::

    {
      "m": 2, "n": 3, "t_steps": 4,
      "control_amplitudes": [[0.5, 0.0], ...],
      "deep_branches": [[{"gate": "H", "targets": [0]}, ...], ...],
      "shallow": [{"gate": "RY", "targets": [2], "angle": 1.82}, ...],
      "halting": {"qubit": 2, "value": 0}
    }

``halting`` may instead be a list with one ``{qubit, value}`` per branch.
The last shallow step is the steering gate; when it is an ``RY`` its angle is
the free parameter solved by :mod:`logdepth.matching`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Any, Sequence, Union

import numpy as np

from .errors import ConfigurationError, ParseError, ValidationError
from .statevector import GATE_KINDS, MAX_QUBITS, PARAMETRIC_GATES, TWO_QUBIT_GATES, GateOp

AMPLITUDE_TOL = 1e-10
T_PHASE = math.pi / 4
MAX_CONTROL_QUBITS = 16


@dataclass(frozen=True)
class HaltingProjector:
    """Single-qubit projector ``|value><value|`` on data qubit ``qubit``."""

    qubit: int
    value: int = 0

    def __post_init__(self) -> None:
        if self.value not in (0, 1):
            raise ValueError(f"halting value must be 0 or 1, got {self.value!r}")


@dataclass(frozen=True)
class BranchProgram:
    steps: tuple[GateOp, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __getitem__(self, idx):
        return self.steps[idx]


@dataclass(frozen=True)
class ComplexityProfile:
    single_qubit_count: int
    two_qubit_count: int
    depth: int


Halting = Union[HaltingProjector, tuple[HaltingProjector, ...]]


@dataclass(frozen=True)
class CircuitPair:
    m: int
    n: int
    t_steps: int
    control_amplitudes: tuple[complex, ...]
    deep_branches: tuple[BranchProgram, ...]
    shallow_program: BranchProgram
    halting: Halting

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "control_amplitudes", tuple(complex(a) for a in self.control_amplitudes)
        )
        object.__setattr__(self, "deep_branches", tuple(self.deep_branches))
        if not isinstance(self.halting, HaltingProjector):
            object.__setattr__(self, "halting", tuple(self.halting))
        validate_pair(self)

    @property
    def num_branches(self) -> int:
        return 2**self.m

    @property
    def weights(self) -> np.ndarray:
        """Branch populations ``|alpha_i|^2``."""
        a = np.asarray(self.control_amplitudes, dtype=complex)
        return a.real**2 + a.imag**2

    @property
    def uniform_halting(self) -> bool:
        return isinstance(self.halting, HaltingProjector)

    def projector(self, branch: int) -> HaltingProjector:
        if isinstance(self.halting, HaltingProjector):
            return self.halting
        return self.halting[branch]

    @property
    def steering_gate(self) -> GateOp:
        return self.shallow_program.steps[-1]

    def with_steering_angle(self, theta: float) -> "CircuitPair":
        """Copy of the pair with the final shallow RY angle set to ``theta``."""
        last = self.steering_gate
        if last.kind != "RY":
            raise ValueError(f"final shallow step is {last.kind}, not a steerable RY")
        steps = self.shallow_program.steps[:-1] + (replace(last, angle=float(theta)),)
        return replace(self, shallow_program=BranchProgram(steps))


def validate_pair(pair: CircuitPair) -> None:
    """Raise :class:`ValidationError` naming the first broken invariant."""
    for name in ("m", "n", "t_steps"):
        value = getattr(pair, name)
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
            raise ValidationError("register size", f"{name} must be a positive integer, got {value!r}")
    n_branches = 2**pair.m
    if len(pair.control_amplitudes) != n_branches:
        raise ValidationError(
            "amplitude count",
            f"expected {n_branches} control amplitudes for m={pair.m}, got {len(pair.control_amplitudes)}",
        )
    total = math.fsum(abs(a) ** 2 for a in pair.control_amplitudes)
    if abs(total - 1.0) > AMPLITUDE_TOL:
        raise ValidationError("normalization", f"sum of |alpha_i|^2 is {total!r}, expected 1")
    if len(pair.deep_branches) != n_branches:
        raise ValidationError(
            "branch count",
            f"expected {n_branches} deep branches for m={pair.m}, got {len(pair.deep_branches)}",
        )
    programs = [(f"deep branch {i}", b) for i, b in enumerate(pair.deep_branches)]
    programs.append(("shallow program", pair.shallow_program))
    for label, program in programs:
        if len(program) != pair.t_steps:
            raise ValidationError(
                "step count", f"{label} has {len(program)} steps, expected {pair.t_steps}"
            )
        for t, gate in enumerate(program.steps):
            bad = [q for q in gate.targets if q >= pair.n]
            if bad:
                raise ValidationError(
                    "qubit index",
                    f"{label} step {t} ({gate}) addresses qubit {bad[0]} >= n={pair.n}",
                )
    projectors = (
        [pair.halting] if isinstance(pair.halting, HaltingProjector) else list(pair.halting)
    )
    if not isinstance(pair.halting, HaltingProjector) and len(projectors) != n_branches:
        raise ValidationError(
            "halting count", f"expected {n_branches} per-branch projectors, got {len(projectors)}"
        )
    for proj in projectors:
        if not 0 <= proj.qubit < pair.n:
            raise ValidationError(
                "projector qubit", f"halting qubit {proj.qubit} outside data register of size {pair.n}"
            )


# -- complexity matching -----------------------------------------------------


def complexity_profile(program: BranchProgram) -> ComplexityProfile:
    two = sum(1 for g in program.steps if g.kind in TWO_QUBIT_GATES)
    return ComplexityProfile(
        single_qubit_count=len(program.steps) - two,
        two_qubit_count=two,
        depth=len(program.steps),
    )


@dataclass(frozen=True)
class MatchingReport:
    branch_profiles: tuple[ComplexityProfile, ...]
    shallow_profile: ComplexityProfile
    matched: bool
    mismatched_branches: tuple[int, ...]


def validate_matching(pair: CircuitPair) -> MatchingReport:
    """Compare every branch's complexity profile with the shallow path.

    Mismatches are reported, never raised.
    """
    shallow = complexity_profile(pair.shallow_program)
    profiles = tuple(complexity_profile(b) for b in pair.deep_branches)
    bad = tuple(i for i, p in enumerate(profiles) if p != shallow)
    return MatchingReport(profiles, shallow, not bad, bad)


# -- documents ---------------------------------------------------------------

_TOP_FIELDS = ("m", "n", "t_steps", "control_amplitudes", "deep_branches", "shallow", "halting")
_GATE_FIELDS = {"gate", "targets", "angle"}


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _parse_gate(obj: Any, path: str) -> GateOp:
    if not isinstance(obj, dict):
        raise ParseError("gate record must be an object", path)
    unknown = set(obj) - _GATE_FIELDS
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)}", path)
    if "gate" not in obj:
        raise ParseError("missing field 'gate'", path)
    kind = obj["gate"]
    if kind not in GATE_KINDS:
        raise ParseError(f"unknown gate {kind!r}", f"{path}.gate")
    if "targets" not in obj:
        raise ParseError("missing field 'targets'", path)
    targets = obj["targets"]
    if not isinstance(targets, list) or not all(_is_int(q) for q in targets):
        raise ParseError("targets must be a list of integers", f"{path}.targets")
    arity = 2 if kind in TWO_QUBIT_GATES else 1
    if len(targets) != arity:
        raise ParseError(f"{kind} takes {arity} target(s), got {len(targets)}", f"{path}.targets")
    angle = obj.get("angle")
    if kind in PARAMETRIC_GATES:
        if angle is None:
            raise ParseError(f"{kind} requires 'angle'", path)
        if not _is_number(angle) or not math.isfinite(angle):
            raise ParseError("angle must be a finite number", f"{path}.angle")
    elif "angle" in obj:
        raise ParseError(f"{kind} takes no angle", f"{path}.angle")
    try:
        return GateOp(kind, tuple(targets), None if angle is None else float(angle))
    except ValueError as exc:
        raise ParseError(str(exc), path) from exc


def _parse_program(obj: Any, path: str) -> BranchProgram:
    if not isinstance(obj, list):
        raise ParseError("program must be a list of gate records", path)
    return BranchProgram(tuple(_parse_gate(g, f"{path}[{t}]") for t, g in enumerate(obj)))


def _parse_projector(obj: Any, path: str) -> HaltingProjector:
    if not isinstance(obj, dict):
        raise ParseError("projector must be an object with 'qubit' and 'value'", path)
    unknown = set(obj) - {"qubit", "value"}
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)}", path)
    for key in ("qubit", "value"):
        if key not in obj:
            raise ParseError(f"missing field {key!r}", path)
        if not _is_int(obj[key]):
            raise ParseError(f"{key} must be an integer", f"{path}.{key}")
    if obj["value"] not in (0, 1):
        raise ParseError("value must be 0 or 1", f"{path}.value")
    return HaltingProjector(obj["qubit"], obj["value"])


def pair_from_dict(doc: Any) -> CircuitPair:
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object", "$")
    unknown = set(doc) - set(_TOP_FIELDS)
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)}", "$")
    for key in _TOP_FIELDS:
        if key not in doc:
            raise ParseError(f"missing field {key!r}", "$")
    for key in ("m", "n", "t_steps"):
        if not _is_int(doc[key]):
            raise ParseError("must be an integer", key)

    amps_raw = doc["control_amplitudes"]
    if not isinstance(amps_raw, list):
        raise ParseError("must be a list of [re, im] pairs", "control_amplitudes")
    amps = []
    for i, pair in enumerate(amps_raw):
        if not (isinstance(pair, list) and len(pair) == 2 and all(_is_number(x) for x in pair)):
            raise ParseError("amplitude must be a [re, im] pair of numbers", f"control_amplitudes[{i}]")
        amps.append(complex(pair[0], pair[1]))

    branches_raw = doc["deep_branches"]
    if not isinstance(branches_raw, list):
        raise ParseError("must be a list of programs", "deep_branches")
    branches = tuple(_parse_program(b, f"deep_branches[{i}]") for i, b in enumerate(branches_raw))
    shallow = _parse_program(doc["shallow"], "shallow")

    halting_raw = doc["halting"]
    if isinstance(halting_raw, list):
        halting: Halting = tuple(
            _parse_projector(p, f"halting[{i}]") for i, p in enumerate(halting_raw)
        )
    else:
        halting = _parse_projector(halting_raw, "halting")

    return CircuitPair(
        m=doc["m"],
        n=doc["n"],
        t_steps=doc["t_steps"],
        control_amplitudes=tuple(amps),
        deep_branches=branches,
        shallow_program=shallow,
        halting=halting,
    )


def parse_pair(document: str) -> CircuitPair:
    """Parse and validate a circuit-pair document.

    Raises :class:`ParseError` for malformed JSON or schema violations and
    :class:`ValidationError` for invariant violations.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc
    return pair_from_dict(doc)


def _gate_to_dict(gate: GateOp) -> dict[str, Any]:
    out: dict[str, Any] = {"gate": gate.kind, "targets": list(gate.targets)}
    if gate.angle is not None:
        out["angle"] = gate.angle
    return out


def _projector_to_dict(p: HaltingProjector) -> dict[str, int]:
    return {"qubit": p.qubit, "value": p.value}


def pair_to_dict(pair: CircuitPair) -> dict[str, Any]:
    if isinstance(pair.halting, HaltingProjector):
        halting: Any = _projector_to_dict(pair.halting)
    else:
        halting = [_projector_to_dict(p) for p in pair.halting]
    return {
        "m": pair.m,
        "n": pair.n,
        "t_steps": pair.t_steps,
        "control_amplitudes": [[a.real, a.imag] for a in pair.control_amplitudes],
        "deep_branches": [[_gate_to_dict(g) for g in b.steps] for b in pair.deep_branches],
        "shallow": [_gate_to_dict(g) for g in pair.shallow_program.steps],
        "halting": halting,
    }


def serialize_pair(pair: CircuitPair) -> str:
    return json.dumps(pair_to_dict(pair), indent=2) + "\n"


# -- built-in example and generator -------------------------------------------


def paper_example(theta: float | None = None) -> CircuitPair:
    """The 4-branch, 3-data-qubit, 4-step reference pair.

    ``theta`` is the shallow steering angle; by default the value that
    matches the deep halting probability of 0.375.
    """
    if theta is None:
        from .matching import solve_ry_closed_form

        theta = solve_ry_closed_form(0.375)
    g = GateOp
    branches = (
        (g("H", (0,)), g("X", (1,)), g("CNOT", (0, 2)), g("RZ", (1,), math.pi / 4)),
        (g("H", (1,)), g("X", (0,)), g("CNOT", (1, 2)), g("RZ", (0,), math.pi / 3)),
        (g("H", (2,)), g("X", (0,)), g("CNOT", (0, 1)), g("RZ", (2,), math.pi / 2)),
        (g("H", (0,)), g("X", (2,)), g("CNOT", (1, 0)), g("RZ", (1,), math.pi / 6)),
    )
    shallow = (g("H", (0,)), g("X", (1,)), g("CNOT", (0, 1)), g("RY", (2,), theta))
    return CircuitPair(
        m=2,
        n=3,
        t_steps=4,
        control_amplitudes=(0.5, 0.5, 0.5, 0.5),
        deep_branches=tuple(BranchProgram(b) for b in branches),
        shallow_program=BranchProgram(shallow),
        halting=HaltingProjector(qubit=2, value=0),
    )


def _random_single(rng: np.random.Generator, qubits: Sequence[int]) -> GateOp:
    q = int(rng.choice(qubits))
    if rng.random() < 0.5:
        return GateOp("H", (q,))
    return GateOp("RZ", (q,), T_PHASE)


def _random_cnot(rng: np.random.Generator, qubits: Sequence[int]) -> GateOp:
    c, t = rng.choice(qubits, size=2, replace=False)
    return GateOp("CNOT", (int(c), int(t)))


def _random_program(
    rng: np.random.Generator, arities: list[int], qubits: Sequence[int]
) -> list[GateOp]:
    order = rng.permutation(arities)
    return [_random_cnot(rng, qubits) if a == 2 else _random_single(rng, qubits) for a in order]


def generate_matched_pair(seed: int, m: int, n: int, t_steps: int) -> CircuitPair:
    """Random complexity-matched pair over the gate set {H, RZ(pi/4), CNOT}.

    Every branch and the shallow path share one complexity profile. The
    shallow path ends in ``RY(0)`` on the halting qubit; when ``n >= 3`` its
    earlier steps avoid that qubit, so every target probability is reachable.
    """
    if not isinstance(m, int) or m < 1:
        raise ConfigurationError(f"m must be >= 1, got {m!r}")
    if not isinstance(n, int) or n < 2:
        raise ConfigurationError(f"n must be >= 2, got {n!r}")
    if not isinstance(t_steps, int) or t_steps < 2:
        raise ConfigurationError(f"t_steps must be >= 2, got {t_steps!r}")
    if n > MAX_QUBITS or m > MAX_CONTROL_QUBITS:
        raise ConfigurationError(
            f"register too large: n <= {MAX_QUBITS} and m <= {MAX_CONTROL_QUBITS} required"
        )
    rng = np.random.default_rng(seed)

    n_two = int(rng.integers(1, t_steps))
    branch_arities = [2] * n_two + [1] * (t_steps - n_two)
    halting_qubit = int(rng.integers(n))
    qubits = list(range(n))

    branches = tuple(
        BranchProgram(tuple(_random_program(rng, branch_arities, qubits)))
        for _ in range(2**m)
    )
    shallow_qubits = [q for q in qubits if q != halting_qubit] if n >= 3 else qubits
    shallow_steps = _random_program(rng, [2] * n_two + [1] * (t_steps - 1 - n_two), shallow_qubits)
    shallow_steps.append(GateOp("RY", (halting_qubit,), 0.0))

    weights = rng.dirichlet(np.ones(2**m))
    phases = rng.uniform(0.0, 2 * math.pi, size=2**m)
    amps = np.sqrt(weights) * np.exp(1j * phases)
    amps /= np.linalg.norm(amps)

    return CircuitPair(
        m=m,
        n=n,
        t_steps=t_steps,
        control_amplitudes=tuple(complex(a) for a in amps),
        deep_branches=branches,
        shallow_program=BranchProgram(tuple(shallow_steps)),
        halting=HaltingProjector(halting_qubit, 0),
    )
