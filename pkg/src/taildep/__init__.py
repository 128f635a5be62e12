"""Robust estimation of the bivariate tail dependence coefficient.

The coefficient eta in (0, 1] measures how strongly the largest values
of two series occur together.  This package standardises bivariate data
by ranks, reduces it to a univariate tail sample, and fits eta by the
classical Hill estimator or by two density-power-divergence estimators
that stay stable under contamination.  Samplers, influence functions
and a Monte Carlo harness reproduce the accompanying simulation study.
"""

from .copulas import (
    BivariateSample,
    ContaminationSpec,
    CopulaModel,
    clayton_cdf,
    gumbel_cdf,
    sample,
    sample_contaminated,
    true_eta,
)
from .estimators import (
    ErmWeights,
    EstimateResult,
    SolverError,
    TailDependenceEstimator,
    dpd_equation,
    dpd_estimate,
    erm_equation,
    erm_estimate,
    erm_weights,
    hill,
    solve_scalar,
)
from .influence import (
    IfDpdParams,
    IfErmParams,
    if_dpd,
    if_erm_all,
    if_erm_single,
    influence_curve,
)
from .mc import (
    CellResult,
    ExperimentSpec,
    McReport,
    builtin_scenarios,
    run_experiment,
    run_replication,
    scenario_preset,
)
from .transforms import (
    ExcessData,
    PseudoSample,
    ScaledLogRatios,
    log_relative_excesses,
    pseudo_sample_from_values,
    ranks,
    scaled_log_ratios,
    to_pseudo_sample,
)

__version__ = "0.1.0"

__all__ = [
    "BivariateSample",
    "CellResult",
    "ContaminationSpec",
    "CopulaModel",
    "ErmWeights",
    "EstimateResult",
    "ExcessData",
    "ExperimentSpec",
    "IfDpdParams",
    "IfErmParams",
    "McReport",
    "PseudoSample",
    "ScaledLogRatios",
    "SolverError",
    "TailDependenceEstimator",
    "builtin_scenarios",
    "clayton_cdf",
    "dpd_equation",
    "dpd_estimate",
    "erm_equation",
    "erm_estimate",
    "erm_weights",
    "gumbel_cdf",
    "hill",
    "if_dpd",
    "if_erm_all",
    "if_erm_single",
    "influence_curve",
    "log_relative_excesses",
    "pseudo_sample_from_values",
    "ranks",
    "run_experiment",
    "run_replication",
    "sample",
    "sample_contaminated",
    "scaled_log_ratios",
    "scenario_preset",
    "solve_scalar",
    "to_pseudo_sample",
    "true_eta",
]
