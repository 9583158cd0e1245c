"""Thermodynamic signature of logical depth in quantum circuit pairs."""

from .analysis import (
    DistinguishabilityMatrix,
    EntropyReport,
    distinguishability,
    effective_environment_entropy,
    entropy_bounds,
    entropy_report,
    observability_threshold,
    overlap_model,
)
from .circuits import (
    BranchProgram,
    CircuitPair,
    ComplexityProfile,
    HaltingProjector,
    MatchingReport,
    complexity_profile,
    generate_matched_pair,
    paper_example,
    parse_pair,
    serialize_pair,
    validate_matching,
)
from .matching import MatchResult, match_pair, solve_ry_closed_form, solve_steering
from .simulation import BranchTrace, PairTrace, run_branch, simulate_pair
from .statevector import (
    DensityMatrix,
    GateOp,
    PureState,
    apply_gate,
    expectation_z,
    projector_probability,
    purity,
    reduced_density,
    von_neumann_entropy,
    zero_state,
)
from .witness import (
    WitnessConfig,
    WitnessResult,
    branch_phase,
    run_witness,
    witness_purity_semiclassical,
    witness_threshold,
)

__version__ = "0.1.0"
