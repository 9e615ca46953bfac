"""Feature matrices on disk, z-score normalization and repeated k-fold plans."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

LABEL_COLUMN = "label"
ID_COLUMN = "record_id"
_TRUE = {"1", "true", "t", "yes", "true-alarm"}
_FALSE = {"0", "false", "f", "no", "false-alarm"}


class MatrixFormatError(ValueError):
    """Malformed feature-matrix file."""


class EmptyMatrixError(MatrixFormatError):
    pass


class RaggedRowError(MatrixFormatError):
    pass


class NonNumericCellError(MatrixFormatError):
    pass


class NonFiniteCellError(MatrixFormatError):
    pass


class MissingLabelError(MatrixFormatError):
    pass


@dataclass
class FeatureMatrix:
    X: np.ndarray
    y: np.ndarray
    names: list[str]
    record_ids: list[str] | None = None
    constant: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y).astype(int)
        if self.X.ndim != 2 or self.X.shape[0] != self.y.size:
            raise ValueError("X must be 2-D with one label per row")
        if len(self.names) != self.X.shape[1]:
            raise ValueError("one name per feature column required")
        if not np.isin(self.y, (0, 1)).all():
            raise ValueError("labels must be binary")

    @property
    def shape(self):
        return self.X.shape

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def rows(self, index) -> "FeatureMatrix":
        index = np.asarray(index)
        ids = [self.record_ids[k] for k in index] if self.record_ids is not None else None
        return replace(self, X=self.X[index], y=self.y[index], record_ids=ids)

    def columns(self, index) -> "FeatureMatrix":
        index = list(index)
        constant = self.constant[index] if self.constant is not None else None
        return replace(self, X=self.X[:, index], names=[self.names[k] for k in index], constant=constant)


def _parse_label(cell: str, line: int) -> int:
    v = cell.strip().lower()
    if v in _TRUE:
        return 1
    if v in _FALSE:
        return 0
    raise NonNumericCellError(f"line {line}: label {cell!r} is not a binary alarm label")


def load_matrix(path, delimiter: str = ",") -> FeatureMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh, delimiter=delimiter) if r and any(c.strip() for c in r)]
    if not rows:
        raise EmptyMatrixError(f"{path}: no header or data")
    header = [h.strip() for h in rows[0]]
    if LABEL_COLUMN not in header:
        raise MissingLabelError(f"{path}: no {LABEL_COLUMN!r} column in header")
    if len(rows) < 2:
        raise EmptyMatrixError(f"{path}: header without data rows")
    label_at = header.index(LABEL_COLUMN)
    id_at = header.index(ID_COLUMN) if ID_COLUMN in header else None
    feature_at = [k for k in range(len(header)) if k not in (label_at, id_at)]
    X = np.empty((len(rows) - 1, len(feature_at)))
    y = np.empty(len(rows) - 1, dtype=int)
    ids = []
    for r, row in enumerate(rows[1:]):
        line = r + 2
        if len(row) != len(header):
            raise RaggedRowError(f"line {line}: {len(row)} cells, header has {len(header)}")
        y[r] = _parse_label(row[label_at], line)
        if id_at is not None:
            ids.append(row[id_at].strip())
        for c, k in enumerate(feature_at):
            try:
                v = float(row[k])
            except ValueError:
                raise NonNumericCellError(
                    f"line {line}, column {header[k]!r}: {row[k]!r} is not numeric"
                ) from None
            if not math.isfinite(v):
                raise NonFiniteCellError(f"line {line}, column {header[k]!r}: non-finite value {row[k]!r}")
            X[r, c] = v
    return FeatureMatrix(X, y, [header[k] for k in feature_at], ids if id_at is not None else None)


def write_matrix(m: FeatureMatrix, path, delimiter: str = ",") -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        header = ([ID_COLUMN] if m.record_ids is not None else []) + list(m.names) + [LABEL_COLUMN]
        w.writerow(header)
        for r in range(m.X.shape[0]):
            lead = [m.record_ids[r]] if m.record_ids is not None else []
            w.writerow(lead + [repr(float(v)) for v in m.X[r]] + [int(m.y[r])])


@dataclass(frozen=True)
class Normalizer:
    mean: np.ndarray
    std: np.ndarray
    constant: np.ndarray

    def apply(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        safe = np.where(self.constant, 1.0, self.std)
        Z = (X - self.mean) / safe
        Z[:, self.constant] = 0.0
        return Z


def fit_normalizer(X, train_index=None) -> Normalizer:
    X = np.asarray(X, dtype=float)
    ref = X if train_index is None else X[np.asarray(train_index)]
    if ref.shape[0] == 0:
        raise ValueError("normalization needs a non-empty training set")
    mean = ref.mean(axis=0)
    std = ref.std(axis=0)
    constant = std <= 1e-12 * np.maximum(1.0, np.abs(mean))
    return Normalizer(mean, std, constant)


def zscore_normalize(m: FeatureMatrix, train_index=None) -> tuple[FeatureMatrix, Normalizer]:
    """Standardize every column with statistics of the training rows only.

    Population standard deviation; constant columns become zeros and are
    flagged in ``constant``.
    """
    norm = fit_normalizer(m.X, train_index)
    return replace(m, X=norm.apply(m.X), constant=norm.constant.copy()), norm


@dataclass(frozen=True)
class FoldPlan:
    k: int
    repeats: int
    seed: int
    n: int
    tests: tuple[tuple[np.ndarray, ...], ...]

    def splits(self):
        """Yield ``(repeat, fold, train_index, test_index)``."""
        everything = np.arange(self.n)
        for r, folds in enumerate(self.tests):
            for f, test in enumerate(folds):
                yield r, f, np.setdiff1d(everything, test), test

    def write(self, path, delimiter: str = ",") -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(delimiter.join(["repeat", "fold", "test_indices"]) + "\n")
            for r, folds in enumerate(self.tests):
                for f, test in enumerate(folds):
                    fh.write(delimiter.join([str(r), str(f), " ".join(map(str, test))]) + "\n")


def repeated_kfold(n: int, k: int = 5, repeats: int = 2, seed: int = 0, y=None, stratify: bool = True) -> FoldPlan:
    """Fresh shuffled k-fold partition per repeat.

    With labels given and ``stratify`` on, each class is dealt round-robin
    across folds so class ratios match; fold sizes still differ by at most
    one.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise ValueError(f"k={k} folds exceed {n} samples")
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    rng = np.random.default_rng(seed)
    plans = []
    for _ in range(repeats):
        if stratify and y is not None:
            y_arr = np.asarray(y).astype(int)
            order = np.concatenate(
                [rng.permutation(np.flatnonzero(y_arr == c)) for c in np.unique(y_arr)]
            )
        else:
            order = rng.permutation(n)
        assign = np.empty(n, dtype=int)
        # round-robin dealing keeps sizes within one; rotate start so folds share the remainder
        offset = int(rng.integers(k))
        assign[order] = (np.arange(n) + offset) % k
        plans.append(tuple(np.sort(np.flatnonzero(assign == f)) for f in range(k)))
    return FoldPlan(k, repeats, seed, n, tuple(plans))
