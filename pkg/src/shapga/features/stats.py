"""Twenty summary statistics of a coefficient vector."""

from __future__ import annotations

import numpy as np

STAT_NAMES = (
    "mean", "mode", "median", "max", "min", "range", "variance", "std",
    "mu3", "mu4", "cv", "kurtosis", "skewness", "hmean", "iqr",
    "shannon_entropy", "log_energy_entropy", "nT_half", "nT_third", "nT_quarter",
)
HIST_BINS = 32
EPS = 1e-12


def _histogram(x):
    lo, hi = float(x.min()), float(x.max())
    counts, edges = np.histogram(x, bins=HIST_BINS, range=(lo, hi))
    return counts, edges


def stat_features(v) -> np.ndarray:
    """Statistics in fixed order (see ``STAT_NAMES``).

    Moments are population-normalized; kurtosis is raw ``mu4 / sigma^4``.
    Ratios with a vanishing denominator are reported as 0. Mode and
    Shannon entropy use a 32-bin histogram over ``[min, max]``; the
    threshold counts use ``|x| > max|x| / k``.
    """
    x = np.asarray(v, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("statistics need a vector of at least two samples")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector contains non-finite values")
    mean = x.mean()
    dev = x - mean
    var = np.mean(dev**2)
    std = np.sqrt(var)
    mu3 = np.mean(dev**3)
    mu4 = np.mean(dev**4)
    lo, hi = x.min(), x.max()
    if hi > lo:
        counts, edges = _histogram(x)
        top = int(np.argmax(counts))
        mode = 0.5 * (edges[top] + edges[top + 1])
        p = counts[counts > 0] / x.size
        shannon = float(-np.sum(p * np.log(p)))
    else:
        mode = lo
        shannon = 0.0
    q25, q75 = np.percentile(x, [25, 75])
    absx = np.abs(x)
    hmean = x.size / np.sum(1.0 / np.maximum(absx, EPS))
    log_energy = float(np.sum(np.log(np.maximum(x**2, EPS))))
    peak = absx.max()
    spread = std > 1e-12 * max(peak, 1e-300)
    cv = std / mean if abs(mean) > 1e-12 * max(peak, 1e-300) else 0.0
    kurt = mu4 / var**2 if spread else 0.0
    skew = mu3 / std**3 if spread else 0.0
    return np.array([
        mean, mode, np.median(x), hi, lo, hi - lo, var, std, mu3, mu4,
        cv, kurt, skew, hmean, q75 - q25,
        shannon, log_energy,
        np.sum(absx > peak / 2), np.sum(absx > peak / 3), np.sum(absx > peak / 4),
    ], dtype=float)
