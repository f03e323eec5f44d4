"""Adaptive multiple importance sampling with gradient-driven proposal moves,
Hessian covariance updates, and decaying pairwise repulsion between proposals.
"""

from .engine import (
    BacktrackConfig,
    GramisConfig,
    IterationRecord,
    RepulsionConfig,
    adapt_covariances,
    adapt_means,
    backtrack_stepsize,
    dm_mis_log_weights,
    poisson_field,
    repulsion_sum,
    run_gramis,
    schedule_value,
)
from .estimators import (
    EstimateReport,
    RmseTable,
    WeightedSampleSet,
    chi2_estimate,
    rmse_aggregate,
    snis_estimate,
    snis_weights,
    uis_estimate,
    window_select,
    z_estimate,
)
from .exceptions import (
    AllNegInfinity,
    DegenerateWeights,
    DegenerateWeightsWarning,
    DimensionMismatch,
    EmptyWindow,
    GramisError,
    InvalidBox,
    InvalidDimension,
    InvalidParameter,
    MissingTruth,
    NonFiniteGradient,
    NonSmoothAtMean,
    NotPositiveDefinite,
    RequiresKnownZ,
)
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    build_target,
    builtin_cells,
    check_gradients,
    config_from_dict,
    config_to_dict,
    load_config,
    run_experiment,
    save_config,
    sweep,
)
from .numerics import (
    fd_gradient,
    fd_jacobian,
    log_mvn_pdf,
    log_sum_exp,
    rng_stream,
    sample_mvn,
    solve_spd,
    spd_factorize,
    unit_sphere_area,
)
from .proposals import (
    GaussianProposal,
    ProposalBank,
    SampleBatch,
    bank_init,
    bank_sample,
    mixture_log_pdf,
    per_proposal_log_pdf,
)
from .sampler import GramisSampler
from .targets import (
    BananaTarget,
    GaussianMixtureTarget,
    GGMixtureTarget,
    GroundTruth,
    TargetDensity,
    gg_covariance_factor,
    gg_log_constant,
    gg_reparam,
)

__version__ = "0.1.0"

__all__ = [
    "AllNegInfinity",
    "BacktrackConfig",
    "BananaTarget",
    "DegenerateWeights",
    "DegenerateWeightsWarning",
    "DimensionMismatch",
    "EmptyWindow",
    "EstimateReport",
    "ExperimentConfig",
    "ExperimentResult",
    "GGMixtureTarget",
    "GaussianMixtureTarget",
    "GaussianProposal",
    "GramisConfig",
    "GramisError",
    "GramisSampler",
    "GroundTruth",
    "InvalidBox",
    "InvalidDimension",
    "InvalidParameter",
    "IterationRecord",
    "MissingTruth",
    "NonFiniteGradient",
    "NonSmoothAtMean",
    "NotPositiveDefinite",
    "ProposalBank",
    "RepulsionConfig",
    "RequiresKnownZ",
    "RmseTable",
    "SampleBatch",
    "TargetDensity",
    "WeightedSampleSet",
    "adapt_covariances",
    "adapt_means",
    "backtrack_stepsize",
    "bank_init",
    "bank_sample",
    "build_target",
    "builtin_cells",
    "check_gradients",
    "chi2_estimate",
    "config_from_dict",
    "config_to_dict",
    "dm_mis_log_weights",
    "fd_gradient",
    "fd_jacobian",
    "gg_covariance_factor",
    "gg_log_constant",
    "gg_reparam",
    "load_config",
    "log_mvn_pdf",
    "log_sum_exp",
    "mixture_log_pdf",
    "per_proposal_log_pdf",
    "poisson_field",
    "repulsion_sum",
    "rmse_aggregate",
    "rng_stream",
    "run_experiment",
    "run_gramis",
    "sample_mvn",
    "save_config",
    "schedule_value",
    "snis_estimate",
    "snis_weights",
    "solve_spd",
    "spd_factorize",
    "sweep",
    "uis_estimate",
    "unit_sphere_area",
    "window_select",
    "z_estimate",
]
