"""Classifier-backed characteristic function with a memo cache.

The value of a feature subset is a blend of sensitivity and specificity of
a classifier trained on those columns::

    v(T) = ((1 - FNR) + mu * (1 - FPR)) / (1 + mu)
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .classifiers import evaluate, train
from .dataset import FeatureMatrix
from .game import Coalition

DEFAULT_MUS = (0.5, 1.0, 3.5)


@dataclass(frozen=True)
class ValuationConfig:
    mu: float = 1.0
    classifier: str = "logistic"
    holdout_fraction: float = 0.25
    inner_folds: int = 0
    seed: int = 0

    def __post_init__(self):
        if not self.mu >= 0:
            raise ValueError("mu must be non-negative")
        if not 0.0 < self.holdout_fraction < 1.0:
            raise ValueError("holdout_fraction must lie in (0, 1)")
        if self.classifier not in ("logistic", "nearest-centroid"):
            raise ValueError(f"inner classifier must be logistic or nearest-centroid, not {self.classifier!r}")
        if self.inner_folds == 1 or self.inner_folds < 0:
            raise ValueError("inner_folds must be 0 (holdout) or at least 2")


def blend(fnr: float, fpr: float, mu: float) -> float:
    return ((1.0 - fnr) + mu * (1.0 - fpr)) / (1.0 + mu)


def stratified_holdout(y, fraction: float, seed: int):
    """Per-class shuffled split; returns ``(train_index, validation_index)``."""
    y = np.asarray(y).astype(int)
    rng = np.random.default_rng(seed)
    train_idx, val_idx = [], []
    for c in (0, 1):
        members = rng.permutation(np.flatnonzero(y == c))
        n_val = int(round(fraction * members.size))
        if members.size >= 2:
            n_val = min(max(n_val, 1), members.size - 1)
        val_idx.append(members[:n_val])
        train_idx.append(members[n_val:])
    return np.sort(np.concatenate(train_idx)), np.sort(np.concatenate(val_idx))


def _inner_splits(y, cfg: ValuationConfig):
    if cfg.inner_folds >= 2:
        from .dataset import repeated_kfold

        plan = repeated_kfold(len(y), cfg.inner_folds, 1, cfg.seed, y=y)
        return [(tr, te) for _, _, tr, te in plan.splits()]
    return [stratified_holdout(y, cfg.holdout_fraction, cfg.seed)]


def coalition_value(data: FeatureMatrix, coalition: Coalition, cfg: ValuationConfig, splits=None) -> float:
    """Sensitivity/specificity blend of a classifier on the columns in ``coalition``.

    The empty coalition is worth 0. With inner folds, the confusion counts
    are pooled over folds before the rates are taken.
    """
    if coalition.bits == 0:
        return 0.0
    if coalition.capacity != data.n_features:
        raise ValueError("coalition capacity does not match the feature count")
    cols = list(coalition.members)
    splits = splits if splits is not None else _inner_splits(data.y, cfg)
    tp = fn = fp = tn = 0
    for train_idx, val_idx in splits:
        if val_idx.size == 0:
            raise ValueError("empty validation partition")
        y_tr = data.y[train_idx]
        if np.unique(y_tr).size < 2:
            raise ValueError("training partition holds a single class")
        model = train(cfg.classifier, data.X[np.ix_(train_idx, cols)], y_tr, seed=cfg.seed)
        rep = evaluate(model, data.X[np.ix_(val_idx, cols)], data.y[val_idx])
        tp, fn, fp, tn = tp + rep.tp, fn + rep.fn, fp + rep.fp, tn + rep.tn
    fnr = fn / (tp + fn) if tp + fn else 0.0
    fpr = fp / (fp + tn) if fp + tn else 0.0
    return blend(fnr, fpr, cfg.mu)


class ValuationCache:
    """Coalition value memo keyed by bit pattern; the empty coalition is pinned at 0."""

    def __init__(self):
        self._values: dict[int, float] = {0: 0.0}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.pinned_hits = 0

    def __len__(self):
        return len(self._values)

    def get(self, bits: int):
        with self._lock:
            value = self._values.get(bits)
            if value is not None:
                self.hits += 1
                if bits == 0:
                    self.pinned_hits += 1
            return value

    def put(self, bits: int, value: float) -> None:
        if bits == 0:
            return
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"coalition value {value} outside [0, 1]")
        with self._lock:
            self._values[bits] = value
            self.misses += 1


def cached_value(cache: ValuationCache, data: FeatureMatrix, coalition: Coalition, cfg: ValuationConfig, splits=None) -> float:
    value = cache.get(coalition.bits)
    if value is None:
        value = coalition_value(data, coalition, cfg, splits)
        cache.put(coalition.bits, value)
    return value


class ClassifierGame:
    """Feature-selection game over the columns of a feature matrix."""

    def __init__(self, data: FeatureMatrix, cfg: ValuationConfig, cache: ValuationCache | None = None):
        self.data = data
        self.cfg = cfg
        self.cache = cache if cache is not None else ValuationCache()
        self.n_players = data.n_features
        self.splits = _inner_splits(data.y, cfg)

    def value(self, coalition: Coalition) -> float:
        return cached_value(self.cache, self.data, coalition, self.cfg, self.splits)
