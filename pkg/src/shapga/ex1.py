"""Extreme Type 1 (Gumbel) de-biasing of GA sample means.

GA samples are treated as block maxima of ``M`` draws from the
all-coalitions marginal distribution. Matching the first two moments of a
Gumbel law gives location ``u`` and scale ``alpha``; ``u`` is taken as the
corrected mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ga import SampleSet

EULER_GAMMA = 0.5772
GUMBEL_VARIANCE_FACTOR = 1.645
BINOMIAL_SENTINEL = 10**18


@dataclass(frozen=True)
class Ex1Fit:
    location: float
    scale: float
    block_size: int
    gamma: float

    @property
    def variance(self) -> float:
        """Fitted variance of the underlying (non-maximal) marginals."""
        return self.scale**2


@dataclass(frozen=True)
class AdjustConfig:
    mode: str = "ex1"
    gamma: float = EULER_GAMMA
    min_block: int = 5

    def __post_init__(self):
        if self.mode not in ("ex1", "raw"):
            raise ValueError(f"adjustment mode must be 'ex1' or 'raw', not {self.mode!r}")
        if self.min_block < 1:
            raise ValueError("min_block must be at least 1")


def compute_M(n_features: int, size: int, n_samples: int) -> int:
    """Block size ``floor(C(n_f - 1, t) / n_G)``, at least 1.

    The binomial saturates at a large sentinel so huge feature counts stay
    in machine range.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if not 0 <= size <= n_features - 1:
        raise ValueError(f"size {size} outside [0, {n_features - 1}]")
    combos = min(math.comb(n_features - 1, size), BINOMIAL_SENTINEL)
    return max(1, combos // n_samples)


def fit_ex1(samples, gamma: float = EULER_GAMMA, block_size: int = 1) -> Ex1Fit:
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise ValueError("EX1 fit needs at least two samples")
    mean = float(x.mean())
    var = float(x.var(ddof=1))
    if var <= 0.0:
        return Ex1Fit(mean, 0.0, block_size, gamma)
    scale = math.sqrt(var / GUMBEL_VARIANCE_FACTOR)
    return Ex1Fit(mean - gamma * scale, scale, block_size, gamma)


def adjusted_mean(samples: SampleSet, cfg: AdjustConfig | str = "ex1") -> float:
    if isinstance(cfg, str):
        cfg = AdjustConfig(mode=cfg)
    if len(samples) == 0:
        raise ValueError("empty sample set")
    raw = float(np.mean(samples.marginals))
    if cfg.mode == "raw" or len(samples) < 2:
        return raw
    m = compute_M(samples.n_features, samples.size, len(samples))
    if m < cfg.min_block:
        return raw
    return fit_ex1(samples.marginals, cfg.gamma, m).location
