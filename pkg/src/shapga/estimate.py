"""GA-sampled, EX1-adjusted, size-truncated Shapley estimation."""

from __future__ import annotations

import logging
import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .ex1 import AdjustConfig, adjusted_mean
from .ga import GaConfig, collect_samples
from .game import Coalition, GameOracle, ShapleyReport, exact_shapley, truncated_shapley

log = logging.getLogger(__name__)


class _CallCounter:
    """Thread-safe ``value`` call counter around a game."""

    def __init__(self, game: GameOracle):
        self.game = game
        self.n_players = game.n_players
        self.calls = 0
        self._lock = threading.Lock()

    def value(self, coalition: Coalition) -> float:
        with self._lock:
            self.calls += 1
        return self.game.value(coalition)


def evaluation_budget(n_features: int, max_size: int, samples_per_size: int) -> int:
    return 2 * n_features * max_size * samples_per_size


def estimate_shapley(
    game: GameOracle,
    ga: GaConfig,
    adjust: AdjustConfig | None = None,
    workers: int = 1,
    feature_names: list[str] | None = None,
) -> ShapleyReport:
    """Estimate every feature's Shapley value from GA samples.

    One GA run per (feature, size) stratum with size below
    ``ga.max_coalition_size``; each stratum mean is adjusted and the
    strata averaged. ``evaluations`` counts characteristic-function calls
    before any caching.
    """
    adjust = adjust or AdjustConfig()
    n = game.n_players
    ga.check_features(n)
    counter = _CallCounter(game)
    tasks = [(i, t) for i in range(n) for t in range(ga.max_coalition_size)]

    def run(task):
        i, t = task
        samples = collect_samples(counter, i, t, ga)
        return task, adjusted_mean(samples, adjust), len(samples)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(task) for task in tasks]

    means = {task: mean for task, mean, _ in results}
    counts = {task: count for task, _, count in results}
    values = truncated_shapley(means, n, ga.max_coalition_size)
    log.info("shapley-ga: %d strata, %d value calls", len(tasks), counter.calls)
    return ShapleyReport(values, means, counts, counter.calls, feature_names)


def exact_report(game: GameOracle, feature_names: list[str] | None = None) -> ShapleyReport:
    counter = _CallCounter(game)
    values = exact_shapley(counter)
    return ShapleyReport(values, {}, {}, counter.calls, feature_names)


def spearman(a, b) -> float:
    """Spearman rank correlation with average ranks for ties."""
    from scipy.stats import spearmanr

    return float(spearmanr(np.asarray(a), np.asarray(b)).statistic)
