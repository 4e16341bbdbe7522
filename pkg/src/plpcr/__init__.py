"""Objective Bayesian and maximum-likelihood inference for repairable systems
under competing risks, with power-law failure intensities, minimal repair,
and time-truncated observation."""

from .data import (
    CauseStats,
    FailureHistory,
    FailureRecord,
    cause_stats,
    harvester_fixture,
    parse_history,
    serialize_history,
    WARRANTY_CLAIM_COUNTS,
)
from .diagnostics import DuaneSeries, duane_fit, duane_points, failure_histogram
from .errors import (
    DiagnosticError,
    DomainError,
    EstimationError,
    ImproperPosteriorError,
    NumericError,
    PlpcrError,
    StudyError,
    UnsupportedModelError,
    ValidationError,
)
from .inference import (
    BayesPoints,
    EstimateRow,
    EstimateTable,
    Method,
    MlEstimates,
    Model,
    PointConvention,
    PosteriorSpec,
    PriorFamily,
    alpha_laws_from_counts,
    bayes_points,
    build_estimate_table,
    cmle,
    credible_interval,
    jeffreys_posterior,
    log_likelihood,
    mle_distinct,
    mle_shared_shape,
    reference_posterior,
    wald_interval,
)
from .model import (
    PlpCauseParams,
    SystemParams,
    alpha_from_mu,
    cumulative_intensity,
    intensity,
    mu_from_alpha,
    system_cumulative_intensity,
    system_intensity,
)
from .montecarlo import (
    McReport,
    McRow,
    PRESET_SCENARIOS,
    Scenario,
    make_scenario,
    parse_scenario,
    run_study,
    simulate_history,
)
from .numerics import (
    GammaParams,
    RandomSource,
    gamma_quantile,
    ln_gamma,
    normal_quantile,
    reg_gamma_p,
    sample_poisson,
    sample_uniform,
)

__version__ = "0.1.0"
