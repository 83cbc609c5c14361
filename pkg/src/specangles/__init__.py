"""Maximal angles between spectral subspaces under PSD perturbations:
exact eigensolving, subspace geometry, closed-form bounds with their
critical constants, the partition infimum oracle, and seeded verification
campaigns."""

from .core import (
    AmbiguousBoundaryError,
    ConvergenceError,
    IntervalSet,
    Projector,
    SpectralDecomposition,
    SymmetricMatrix,
    classify_points,
    eigh,
    is_psd,
    membership_tol,
    operator_norm,
    set_distance,
    shift_set,
    spectral_projector,
)
from .geometry import (
    AngleReport,
    BlockSplit,
    angle_report,
    block_split,
    compression_2x2,
    psd_block_bounds,
    reflection_defect,
    sin_two_theta_norm,
)
from .bounds import (
    BoundConstants,
    C_CRIT,
    C_CRIT_SEM,
    CONVEX_SEPARATED,
    EnclosureReport,
    INTERLEAVED,
    LOG_THRESHOLD,
    LogBound,
    NoBoundKnownError,
    OmegaComponent,
    PerturbationInstance,
    N_eval,
    bound_corollary,
    bound_favorable,
    bound_generic,
    bound_log,
    bound_sin2theta,
    constants,
    continuity_modulus,
    convexity_condition,
    enclosure_check,
    gap_persistence,
    kappa_solve,
    omega_component,
    truncate_digits,
)
from .partitions import (
    ChainPlan,
    PartitionPlan,
    chain_demo,
    make_plan,
    optimize,
    riemann_limit_check,
)
from .instances import (
    DOUBLY_INTERLEAVED,
    SpecPlan,
    block_example,
    convex_plan,
    interleaved_plan,
    random_instance,
    rank_one_instance,
    sharpness_pair,
)
from .campaign import (
    ROW_FIELDS,
    BoundRow,
    CampaignConfig,
    ConfigError,
    TrialReport,
    rows_csv,
    rows_jsonl,
    rows_of,
    run_campaign,
)
from .rng import PortableRng

__all__ = [
    "AmbiguousBoundaryError",
    "AngleReport",
    "BlockSplit",
    "BoundConstants",
    "BoundRow",
    "CONVEX_SEPARATED",
    "C_CRIT",
    "C_CRIT_SEM",
    "CampaignConfig",
    "ChainPlan",
    "ConfigError",
    "ConvergenceError",
    "DOUBLY_INTERLEAVED",
    "EnclosureReport",
    "INTERLEAVED",
    "IntervalSet",
    "LOG_THRESHOLD",
    "LogBound",
    "N_eval",
    "NoBoundKnownError",
    "OmegaComponent",
    "PartitionPlan",
    "PerturbationInstance",
    "PortableRng",
    "Projector",
    "ROW_FIELDS",
    "SpecPlan",
    "SpectralDecomposition",
    "SymmetricMatrix",
    "TrialReport",
    "angle_report",
    "block_example",
    "block_split",
    "bound_corollary",
    "bound_favorable",
    "bound_generic",
    "bound_log",
    "bound_sin2theta",
    "chain_demo",
    "classify_points",
    "compression_2x2",
    "constants",
    "continuity_modulus",
    "convex_plan",
    "convexity_condition",
    "eigh",
    "enclosure_check",
    "gap_persistence",
    "interleaved_plan",
    "is_psd",
    "kappa_solve",
    "make_plan",
    "membership_tol",
    "omega_component",
    "operator_norm",
    "optimize",
    "psd_block_bounds",
    "random_instance",
    "rank_one_instance",
    "reflection_defect",
    "riemann_limit_check",
    "rows_csv",
    "rows_jsonl",
    "rows_of",
    "run_campaign",
    "set_distance",
    "sharpness_pair",
    "shift_set",
    "sin_two_theta_norm",
    "spectral_projector",
    "truncate_digits",
]
