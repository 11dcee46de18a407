"""Grover-based reliability benchmarking for simulated and external quantum backends."""

__version__ = "0.1.0"

from .errors import CapacityError, GradeError, NotFoundError, ParseError, ValidationError
from .kernels import BACKEND
from .statevector import (
    Circuit,
    CountsMap,
    GateKind,
    GateOp,
    Statevector,
    apply_circuit,
    apply_gate,
    new_zero_state,
    probabilities,
    sample_counts,
)
from .scoring import (
    ProbabilityDistribution,
    ScoreBreakdown,
    ScoreParams,
    compute_score,
    counts_to_distribution,
)
from .grover import (
    GroverPlan,
    SearchSpec,
    build_grover_circuit,
    construct_diffusion,
    construct_oracle,
    generate_space_by_num_targets,
    generate_space_explicit,
    generate_space_for_target_list,
    optimal_iterations,
)
from .noise import NoiseProfile, get_profile, load_profiles, preset_profiles, run_noisy

__all__ = [
    "BACKEND",
    "CapacityError",
    "Circuit",
    "CountsMap",
    "GateKind",
    "GateOp",
    "GradeError",
    "GroverPlan",
    "NoiseProfile",
    "NotFoundError",
    "ParseError",
    "ProbabilityDistribution",
    "ScoreBreakdown",
    "ScoreParams",
    "SearchSpec",
    "Statevector",
    "ValidationError",
    "apply_circuit",
    "apply_gate",
    "build_grover_circuit",
    "compute_score",
    "construct_diffusion",
    "construct_oracle",
    "counts_to_distribution",
    "generate_space_by_num_targets",
    "generate_space_explicit",
    "generate_space_for_target_list",
    "get_profile",
    "load_profiles",
    "new_zero_state",
    "optimal_iterations",
    "preset_profiles",
    "probabilities",
    "run_noisy",
    "sample_counts",
]
