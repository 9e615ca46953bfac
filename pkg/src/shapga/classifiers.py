"""Small deterministic binary classifiers and their evaluation metrics.

Positive class (label 1) is a true alarm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

KINDS = ("logistic", "nearest-centroid", "rusboost-lite")


@dataclass
class BinaryModel:
    kind: str
    params: dict = field(default_factory=dict)
    threshold: float = 0.5
    n_features: int = 0

    def scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got shape {X.shape}")
        if self.kind == "logistic":
            z = self.params["intercept"] + X @ self.params["coef"]
            return _sigmoid(z)
        if self.kind == "nearest-centroid":
            d_pos = np.linalg.norm(X - self.params["pos"], axis=1)
            d_neg = np.linalg.norm(X - self.params["neg"], axis=1)
            total = d_pos + d_neg
            with np.errstate(invalid="ignore", divide="ignore"):
                s = np.where(total > 0, d_neg / total, 0.5)
            return s
        if self.kind == "rusboost-lite":
            votes = np.zeros(X.shape[0])
            for alpha, tree in zip(self.params["alphas"], self.params["trees"]):
                votes += alpha * _tree_predict(tree, X)
            total = float(np.sum(self.params["alphas"]))
            return votes / total if total > 0 else np.full(X.shape[0], 0.5)
        raise ValueError(f"unknown classifier kind {self.kind!r}")

    def predict(self, X) -> np.ndarray:
        return (self.scores(X) >= self.threshold).astype(int)


@dataclass(frozen=True)
class MetricsReport:
    tp: int
    fn: int
    fp: int
    tn: int

    @property
    def n(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    @property
    def fnr(self) -> float:
        pos = self.tp + self.fn
        return self.fn / pos if pos else 0.0

    @property
    def fpr(self) -> float:
        neg = self.fp + self.tn
        return self.fp / neg if neg else 0.0

    @property
    def sensitivity(self) -> float:
        return 1.0 - self.fnr

    @property
    def specificity(self) -> float:
        return 1.0 - self.fpr

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.n


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _check_training(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(int)
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValueError("X must be 2-D with one row per label")
    if not np.all(np.isfinite(X)):
        raise ValueError("training features contain non-finite values")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0/1")
    counts = np.bincount(y, minlength=2)
    if counts.min() < 2:
        raise ValueError(f"need at least two samples per class, got {counts.tolist()}")
    return X, y


def _fit_logistic(X, y, l2=1e-2, max_iter=25, tol=1e-10):
    """Class-weighted L2 logistic regression by Newton's method.

    The intercept is not penalized. The objective is strictly convex, so
    the fixed iteration cap is the only source of approximation.
    """
    n, d = X.shape
    counts = np.bincount(y, minlength=2)
    w = np.where(y == 1, n / (2.0 * counts[1]), n / (2.0 * counts[0])) / n
    A = np.hstack([np.ones((n, 1)), X])
    beta = np.zeros(d + 1)
    penalty = np.full(d + 1, l2)
    penalty[0] = 0.0
    for _ in range(max_iter):
        p = _sigmoid(A @ beta)
        grad = A.T @ (w * (p - y)) + penalty * beta
        hess = (A * (w * p * (1 - p))[:, None]).T @ A + np.diag(penalty) + 1e-12 * np.eye(d + 1)
        step = np.linalg.solve(hess, grad)
        beta -= step
        if np.max(np.abs(step)) < tol:
            break
    return {"intercept": float(beta[0]), "coef": beta[1:].copy()}


def _best_split(X, y, w):
    """Axis-aligned split minimizing weighted misclassification.

    Returns ``(feature, threshold, error)`` or ``None`` when no split
    separates distinct values.
    """
    best = None
    total_pos = float(np.sum(w * y))
    total_neg = float(np.sum(w * (1 - y)))
    for f in range(X.shape[1]):
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        wp = np.cumsum(w[order] * y[order])
        wn = np.cumsum(w[order] * (1 - y[order]))
        valid = np.flatnonzero(xs[:-1] < xs[1:])
        if valid.size == 0:
            continue
        lp, ln = wp[valid], wn[valid]
        rp, rn = total_pos - lp, total_neg - ln
        err = np.minimum(lp, ln) + np.minimum(rp, rn)
        k = int(np.argmin(err))
        if best is None or err[k] < best[2] - 1e-15:
            j = valid[k]
            best = (f, 0.5 * (xs[j] + xs[j + 1]), float(err[k]))
    return best


def _leaf(y, w):
    return int(np.sum(w * y) >= np.sum(w * (1 - y)))


def _fit_tree(X, y, w, depth=2):
    if depth == 0 or np.all(y == y[0]):
        return _leaf(y, w)
    split = _best_split(X, y, w)
    if split is None:
        return _leaf(y, w)
    f, thr, _ = split
    left = X[:, f] <= thr
    return (f, thr, _fit_tree(X[left], y[left], w[left], depth - 1),
            _fit_tree(X[~left], y[~left], w[~left], depth - 1))


def _tree_predict(tree, X):
    if isinstance(tree, int):
        return np.full(X.shape[0], float(tree))
    f, thr, lo, hi = tree
    left = X[:, f] <= thr
    out = np.empty(X.shape[0])
    out[left] = _tree_predict(lo, X[left])
    out[~left] = _tree_predict(hi, X[~left])
    return out


def _fit_rusboost(X, y, rng, rounds=50, learning_rate=1.0, depth=2):
    """AdaBoost where each round sees a 1:1 random undersample of the majority class."""
    n = y.size
    weights = np.full(n, 1.0 / n)
    pos = np.flatnonzero(y == 1)
    neg = np.flatnonzero(y == 0)
    minority, majority = (pos, neg) if pos.size <= neg.size else (neg, pos)
    trees, alphas = [], []
    for _ in range(rounds):
        keep = np.sort(np.concatenate([minority, rng.choice(majority, minority.size, replace=False)]))
        sw = weights[keep] / weights[keep].sum()
        tree = _fit_tree(X[keep], y[keep], sw, depth)
        pred = _tree_predict(tree, X)
        miss = pred != y
        err = float(np.sum(weights[miss]))
        if err >= 0.5:
            continue
        err = max(err, 1e-10)
        alpha = learning_rate * 0.5 * np.log((1.0 - err) / err)
        trees.append(tree)
        alphas.append(alpha)
        weights = weights * np.exp(np.where(miss, alpha, -alpha))
        weights /= weights.sum()
    if not trees:
        trees, alphas = [_leaf(y, np.full(n, 1.0 / n))], [1.0]
    return {"trees": trees, "alphas": np.asarray(alphas)}


def train(kind: str, X, y, seed: int = 0, **hyper) -> BinaryModel:
    X, y = _check_training(X, y)
    if kind == "logistic":
        params = _fit_logistic(X, y, **hyper)
    elif kind == "nearest-centroid":
        params = {"pos": X[y == 1].mean(axis=0), "neg": X[y == 0].mean(axis=0)}
    elif kind == "rusboost-lite":
        params = _fit_rusboost(X, y, np.random.default_rng(seed), **hyper)
    else:
        raise ValueError(f"unknown classifier kind {kind!r}; choose from {KINDS}")
    return BinaryModel(kind, params, 0.5, X.shape[1])


def confusion(y_true, y_pred) -> MetricsReport:
    y_true = np.asarray(y_true).astype(int)
    y_pred = np.asarray(y_pred).astype(int)
    if y_true.size == 0:
        raise ValueError("empty evaluation set")
    return MetricsReport(
        tp=int(np.sum((y_true == 1) & (y_pred == 1))),
        fn=int(np.sum((y_true == 1) & (y_pred == 0))),
        fp=int(np.sum((y_true == 0) & (y_pred == 1))),
        tn=int(np.sum((y_true == 0) & (y_pred == 0))),
    )


def evaluate(model: BinaryModel, X, y) -> MetricsReport:
    y = np.asarray(y)
    if y.size == 0:
        raise ValueError("empty evaluation set")
    return confusion(y, model.predict(X))


def roc_auc(scores, y):
    """ROC points over every distinct score threshold, and trapezoidal AUC.

    Returns ``(points, auc)`` where ``points`` is an array of rows
    ``(threshold, fpr, tpr)``; the first row uses threshold ``inf``.
    Tied scores move both rates in one step.
    """
    scores = np.asarray(scores, dtype=float)
    y = np.asarray(y).astype(int)
    n_pos = int(np.sum(y == 1))
    n_neg = int(np.sum(y == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs both classes")
    order = np.argsort(-scores, kind="stable")
    s, lab = scores[order], y[order]
    tps = np.cumsum(lab)
    fps = np.cumsum(1 - lab)
    last = np.r_[np.flatnonzero(s[1:] != s[:-1]), s.size - 1]
    thresholds = np.r_[np.inf, s[last]]
    tpr = np.r_[0.0, tps[last] / n_pos]
    fpr = np.r_[0.0, fps[last] / n_neg]
    auc = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))
    return np.column_stack([thresholds, fpr, tpr]), auc


def write_roc(points, path, delimiter: str = ",") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(delimiter.join(["threshold", "fpr", "tpr"]) + "\n")
        for thr, fpr, tpr in points:
            fh.write(delimiter.join(repr(float(v)) for v in (thr, fpr, tpr)) + "\n")
