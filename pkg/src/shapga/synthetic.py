"""Synthetic games, planted datasets and simulated physiological records."""

from __future__ import annotations

import math

import numpy as np

from .game import FunctionGame, TableGame


def additive_game(weights) -> FunctionGame:
    w = [float(x) for x in weights]
    return FunctionGame(len(w), lambda members: sum(w[j] for j in members))


def majority_game(n: int = 3, quota: int | None = None) -> FunctionGame:
    quota = n // 2 + 1 if quota is None else quota
    return FunctionGame(n, lambda members: 1.0 if len(members) >= quota else 0.0)


def glove_game(left, right, n: int) -> FunctionGame:
    """Pairs of one left and one right glove are worth 1 each (unnormalized)."""
    left, right = set(left), set(right)
    return FunctionGame(
        n, lambda m: float(min(sum(j in left for j in m), sum(j in right for j in m)))
    )


def random_table_game(n: int, rng: np.random.Generator) -> TableGame:
    table = rng.uniform(0.0, 1.0, size=1 << n)
    table[0] = 0.0
    return TableGame(table)


def saturating_game(n: int, rng: np.random.Generator, synergy: float = 0.05) -> FunctionGame:
    """``1 - exp(-(sum of weights + pairwise synergies))``; values in [0, 1).

    Weights are heavy-tailed so the Shapley ranking is well spread.
    """
    w = rng.exponential(0.4, size=n)
    s = rng.uniform(0.0, synergy, size=(n, n))
    s = np.triu(s, 1)

    def fn(members):
        idx = list(members)
        total = w[idx].sum() + s[np.ix_(idx, idx)].sum()
        return 1.0 - math.exp(-total)

    return FunctionGame(n, fn)


def planted_pair_game(n: int, i: int, j: int) -> FunctionGame:
    """Worth 1 exactly when both ``i`` and ``j`` are present.

    The marginal contribution of ``i`` is 1 iff the coalition holds ``j``.
    """
    return FunctionGame(n, lambda m: 1.0 if i in m and j in m else 0.0)


def planted_dataset(
    n_samples: int = 300,
    n_features: int = 30,
    n_informative: int = 5,
    seed: int = 0,
    positive_rate: float = 0.3,
    shift: float = 1.0,
    separable: bool = False,
):
    """Gaussian features where only the first ``n_informative`` depend on the label.

    Returns ``(X, y)``. With ``separable=True`` the informative columns are
    shifted far enough that any reasonable classifier separates the classes.
    """
    rng = np.random.default_rng(seed)
    y = np.zeros(n_samples, dtype=int)
    n_pos = max(2, int(round(positive_rate * n_samples)))
    y[rng.permutation(n_samples)[:n_pos]] = 1
    X = rng.normal(size=(n_samples, n_features))
    delta = 10.0 if separable else shift
    X[:, :n_informative] += delta * y[:, None]
    return X, y


def simulated_record(
    seed: int,
    duration: float = 10.0,
    fs: float = 250.0,
    heart_rate: float = 75.0,
    label: bool = True,
):
    """Crude three-channel ICU record: ECG spikes, pressure and pleth pulses.

    True alarms get a faster, more irregular rhythm so the classes differ.
    """
    rng = np.random.default_rng(seed)
    n = int(duration * fs)
    t = np.arange(n) / fs
    rate = heart_rate * (1.6 if label else 1.0)
    jitter = 0.15 if label else 0.03
    beats = []
    tb = rng.uniform(0.1, 0.5)
    while tb < duration - 0.1:
        beats.append(tb)
        tb += (60.0 / rate) * (1.0 + jitter * rng.normal())
    beats = np.asarray(beats)
    ecg = np.zeros(n)
    abp = np.zeros(n)
    pleth = np.zeros(n)
    for b in beats:
        ecg += np.exp(-0.5 * ((t - b) / 0.012) ** 2)
        ecg -= 0.15 * np.exp(-0.5 * ((t - b - 0.04) / 0.02) ** 2)
        ecg += 0.2 * np.exp(-0.5 * ((t - b - 0.25) / 0.05) ** 2)
        abp += 40.0 * np.exp(-0.5 * ((t - b - 0.15) / 0.08) ** 2)
        pleth += np.exp(-0.5 * ((t - b - 0.25) / 0.12) ** 2)
    ecg += 0.03 * rng.normal(size=n)
    abp += 80.0 + 2.0 * rng.normal(size=n)
    pleth += 0.05 * rng.normal(size=n)
    return ecg, abp, pleth
