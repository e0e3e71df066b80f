"""Comparator-adaptive online learning with switching costs."""

from ._core import (
    BaselineLearner,
    DoublingLearner,
    GradientBoundError,
    LearnerConfig,
    LifecycleError,
    PotentialLearner,
    RangeError,
    analytic_derivs,
    backtest,
    coordinate_baseline,
    coordinate_olo,
    discrete_derivs,
    divergences,
    erfi,
    erfi_inv,
    gen_synthetic_market,
    lea_learner,
    lea_project,
    potential_bound,
    potential_value,
    residual_delta,
    run_suite,
)

__all__ = [
    "BaselineLearner",
    "DoublingLearner",
    "GradientBoundError",
    "LearnerConfig",
    "LifecycleError",
    "PotentialLearner",
    "RangeError",
    "analytic_derivs",
    "backtest",
    "coordinate_baseline",
    "coordinate_olo",
    "discrete_derivs",
    "divergences",
    "erfi",
    "erfi_inv",
    "gen_synthetic_market",
    "lea_learner",
    "lea_project",
    "potential_bound",
    "potential_value",
    "residual_delta",
    "run_suite",
]
