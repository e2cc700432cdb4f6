"""Wavelet estimation of power densities from size-biased samples."""

from .api import PowerDensityEstimator
from .auxdensity import (
    KernelDensityEstimate,
    WaveletDensityEstimate,
    fit_kde,
    silverman_bandwidth,
    sj_bandwidth,
    wavelet_density,
)
from .estimator import (
    METHODS,
    EstimatorConfig,
    PowerDensityEstimate,
    config_for_method,
    cox_cdf,
    default_epsilon,
    estimate_density,
    estimate_mu_hat,
    fit_power_density,
    resolve_j1,
    universal_threshold,
)
from .filters import UnknownFilterError, WaveletFilter, available_filters, load_filter
from .simulation import (
    AseTable,
    MonteCarloPlan,
    SimulationExample,
    accept_reject_sample,
    ase,
    efficiency,
    make_example,
    run_monte_carlo,
)
from .warp import WarpFunction, empirical_warp, identity_warp
from .wavelets import (
    EvalPrecision,
    cascade_table,
    eval_periodized_phi,
    eval_periodized_psi,
    eval_phi,
    eval_psi,
)
from .weights import (
    WeightEvalError,
    WeightFunction,
    WeightSyntaxError,
    parse_weight,
    weight_from_callable,
    weight_from_spec,
)

__version__ = "1.0.0"

__all__ = [
    "AseTable",
    "EstimatorConfig",
    "EvalPrecision",
    "KernelDensityEstimate",
    "METHODS",
    "MonteCarloPlan",
    "PowerDensityEstimate",
    "PowerDensityEstimator",
    "SimulationExample",
    "UnknownFilterError",
    "WarpFunction",
    "WaveletDensityEstimate",
    "WaveletFilter",
    "WeightEvalError",
    "WeightFunction",
    "WeightSyntaxError",
    "accept_reject_sample",
    "ase",
    "available_filters",
    "cascade_table",
    "config_for_method",
    "cox_cdf",
    "default_epsilon",
    "efficiency",
    "empirical_warp",
    "estimate_density",
    "estimate_mu_hat",
    "eval_periodized_phi",
    "eval_periodized_psi",
    "eval_phi",
    "eval_psi",
    "fit_kde",
    "fit_power_density",
    "identity_warp",
    "load_filter",
    "make_example",
    "parse_weight",
    "resolve_j1",
    "run_monte_carlo",
    "silverman_bandwidth",
    "sj_bandwidth",
    "universal_threshold",
    "wavelet_density",
    "weight_from_callable",
    "weight_from_spec",
]
