"""Filter-style reference scorers: chi-square, mutual information, ReliefF."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import format_float, rank_descending


@dataclass
class ScoreVector:
    scores: np.ndarray
    method: str
    higher_is_better: bool = True

    def ranks(self) -> np.ndarray:
        s = self.scores if self.higher_is_better else -self.scores
        return rank_descending(s)

    def write(self, path, names=None, delimiter: str = ",") -> None:
        names = names or [f"f{i}" for i in range(self.scores.size)]
        ranks = self.ranks()
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(delimiter.join(["feature", "method", "score", "rank"]) + "\n")
            for k in np.argsort(ranks, kind="stable"):
                fh.write(delimiter.join([names[k], self.method, format_float(self.scores[k]), str(ranks[k])]) + "\n")


def bin_features(X, bins: int = 10) -> np.ndarray:
    """Equal-width bin index per entry after per-column min-max rescaling.

    Constant columns land in bin 0.
    """
    if bins < 2:
        raise ValueError("bins must be at least 2")
    X = np.asarray(X, dtype=float)
    lo = X.min(axis=0)
    span = X.max(axis=0) - lo
    safe = np.where(span > 0, span, 1.0)
    scaled = (X - lo) / safe
    return np.minimum((scaled * bins).astype(int), bins - 1)


def _contingency(binned_col, y, bins):
    table = np.zeros((bins, 2))
    np.add.at(table, (binned_col, y), 1.0)
    return table


def _check_labels(y):
    y = np.asarray(y).astype(int)
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be binary")
    return y


def chi2_scores(X, y, bins: int = 10) -> ScoreVector:
    y = _check_labels(y)
    B = bin_features(X, bins)
    out = np.zeros(B.shape[1])
    for f in range(B.shape[1]):
        obs = _contingency(B[:, f], y, bins)
        obs = obs[obs.sum(axis=1) > 0]
        if obs.shape[0] < 2:
            continue
        expected = obs.sum(axis=1, keepdims=True) * obs.sum(axis=0, keepdims=True) / obs.sum()
        nz = expected > 0
        out[f] = float(np.sum((obs[nz] - expected[nz]) ** 2 / expected[nz]))
    return ScoreVector(out, "chi2")


def mi_scores(X, y, bins: int = 10) -> ScoreVector:
    """Histogram mutual information in nats."""
    y = _check_labels(y)
    B = bin_features(X, bins)
    n = y.size
    out = np.zeros(B.shape[1])
    for f in range(B.shape[1]):
        joint = _contingency(B[:, f], y, bins) / n
        pb = joint.sum(axis=1, keepdims=True)
        py = joint.sum(axis=0, keepdims=True)
        nz = joint > 0
        out[f] = max(0.0, float(np.sum(joint[nz] * np.log(joint[nz] / (pb @ py)[nz]))))
    return ScoreVector(out, "mi")


def relief_scores(X, y, n_neighbors: int = 5, n_iterations: int | None = None, seed: int = 0) -> ScoreVector:
    """ReliefF weights with Euclidean neighbours.

    For each sampled instance the per-feature distance to its nearest
    misses is credited and the distance to its nearest hits is debited,
    each scaled by the feature's range.
    """
    X = np.asarray(X, dtype=float)
    y = _check_labels(y)
    n, d = X.shape
    counts = np.bincount(y, minlength=2)
    if counts.min() < 2:
        raise ValueError("ReliefF needs at least two samples per class")
    n_iterations = min(n, 200) if n_iterations is None else min(n_iterations, n)
    rng = np.random.default_rng(seed)
    span = X.max(axis=0) - X.min(axis=0)
    scale = np.where(span > 0, 1.0 / np.where(span > 0, span, 1.0), 0.0)
    sq = np.sum(X**2, axis=1)
    weights = np.zeros(d)
    for r in rng.choice(n, size=n_iterations, replace=False):
        dist = sq + sq[r] - 2.0 * X @ X[r]
        dist[r] = np.inf
        same = y == y[r]
        hit_pool = np.flatnonzero(same)
        miss_pool = np.flatnonzero(~same)
        hit_pool = hit_pool[hit_pool != r]
        k_hit = min(n_neighbors, hit_pool.size)
        k_miss = min(n_neighbors, miss_pool.size)
        hits = hit_pool[np.argsort(dist[hit_pool], kind="stable")[:k_hit]]
        misses = miss_pool[np.argsort(dist[miss_pool], kind="stable")[:k_miss]]
        weights += np.abs(X[misses] - X[r]).mean(axis=0) * scale
        weights -= np.abs(X[hits] - X[r]).mean(axis=0) * scale
    return ScoreVector(weights / n_iterations, "relief")
