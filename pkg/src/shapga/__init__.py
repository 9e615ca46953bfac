"""Shapley-value feature selection with a genetic-algorithm coalition sampler."""

from .ex1 import AdjustConfig, Ex1Fit, adjusted_mean, compute_M, fit_ex1
from .estimate import estimate_shapley, evaluation_budget
from .ga import Chromosome, GaConfig, SampleSet, collect_samples
from .game import (
    Coalition,
    FunctionGame,
    GameOracle,
    ShapleyReport,
    TableGame,
    exact_shapley,
    marginal_contribution,
    truncated_shapley,
    verify_game_properties,
)
from .valuation import ClassifierGame, ValuationCache, ValuationConfig, coalition_value

__version__ = "0.1.0"

__all__ = [
    "AdjustConfig", "Ex1Fit", "adjusted_mean", "compute_M", "fit_ex1",
    "estimate_shapley", "evaluation_budget",
    "Chromosome", "GaConfig", "SampleSet", "collect_samples",
    "Coalition", "FunctionGame", "GameOracle", "ShapleyReport", "TableGame",
    "exact_shapley", "marginal_contribution", "truncated_shapley", "verify_game_properties",
    "ClassifierGame", "ValuationCache", "ValuationConfig", "coalition_value",
]
