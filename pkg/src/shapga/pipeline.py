"""End-to-end commands: extract, select, evaluate, report."""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .baselines import ScoreVector, chi2_scores, mi_scores, relief_scores
from .classifiers import roc_auc, train, evaluate, write_roc
from .config import RunConfig
from .dataset import FeatureMatrix, fit_normalizer, load_matrix, repeated_kfold, write_matrix, zscore_normalize
from .estimate import estimate_shapley, evaluation_budget, exact_report
from .features.extract import FEATURE_NAMES, SOURCES, extract_all, read_record, source_of
from .game import format_float, rank_descending
from .valuation import ClassifierGame

log = logging.getLogger(__name__)

RECORD_SUFFIXES = (".csv", ".txt")
REPORT_GROUPS = SOURCES + ("untagged",)


class PipelineError(RuntimeError):
    """A command could not produce any output."""


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def run_extract(records_dir, out_path, workers: int = 1) -> FeatureMatrix:
    paths = sorted(p for p in Path(records_dir).iterdir() if p.suffix in RECORD_SUFFIXES)
    if not paths:
        raise ValueError(f"{records_dir}: no record files")

    def one(path):
        try:
            record = read_record(path)
            return record.record_id, record.label, extract_all(record).values
        except (ValueError, OSError) as exc:
            log.warning("skipping record %s: %s", path.stem, exc)
            return None

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, paths))
    else:
        results = [one(p) for p in paths]
    results = sorted((r for r in results if r is not None), key=lambda r: r[0])
    if not results:
        raise PipelineError(f"{records_dir}: every record failed")
    matrix = FeatureMatrix(
        np.vstack([r[2] for r in results]),
        np.array([r[1] for r in results]),
        list(FEATURE_NAMES),
        [r[0] for r in results],
    )
    write_matrix(matrix, out_path)
    return matrix


def score_features(matrix: FeatureMatrix, cfg: RunConfig):
    """Score every feature; returns ``(scores, report_or_vector, summary)``."""
    summary = {"method": cfg.method_label(), "n_features": matrix.n_features, "n_samples": matrix.shape[0]}
    normalized, _ = zscore_normalize(matrix)
    if cfg.method in ("shapley-ga", "shapley-exact"):
        game = ClassifierGame(normalized, cfg.valuation_config())
        if cfg.method == "shapley-ga":
            ga = cfg.ga_config()
            ga.check_features(matrix.n_features)
            report = estimate_shapley(game, ga, cfg.adjust_config(), cfg.workers, matrix.names)
            summary["budget"] = evaluation_budget(matrix.n_features, ga.max_coalition_size, ga.samples_per_size)
        else:
            if matrix.n_features > cfg.exact_ceiling:
                raise ValueError(
                    f"shapley-exact limited to {cfg.exact_ceiling} features, matrix has {matrix.n_features}"
                )
            report = exact_report(game, matrix.names)
        summary["nu_evaluations"] = report.evaluations
        summary["cache_entries"] = len(game.cache)
        summary["cache_misses"] = game.cache.misses
        return report.values, report, summary
    if cfg.method == "chi2":
        vec = chi2_scores(matrix.X, matrix.y, cfg.bins)
    elif cfg.method == "mi":
        vec = mi_scores(matrix.X, matrix.y, cfg.bins)
    else:
        vec = relief_scores(normalized.X, normalized.y, cfg.relief_neighbors, cfg.relief_iterations, cfg.seed)
    return vec.scores, vec, summary


def run_select(matrix_path, cfg: RunConfig, out_dir) -> dict:
    matrix = load_matrix(matrix_path)
    if cfg.top_k > matrix.n_features:
        raise ValueError(f"top_k {cfg.top_k} exceeds {matrix.n_features} features")
    if cfg.method == "shapley-ga" and cfg.max_coalition_size > matrix.n_features:
        raise ValueError(
            f"matrix has {matrix.n_features} features, fewer than max_coalition_size {cfg.max_coalition_size}"
        )
    scores, result, summary = score_features(matrix, cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if isinstance(result, ScoreVector):
        result.write(out / "scores.csv", matrix.names)
    else:
        result.write(out / "scores.csv")
    ranks = rank_descending(scores)
    order = np.argsort(ranks, kind="stable")[: cfg.top_k]
    label = cfg.method_label()
    _write_rows(
        out / "selection.csv",
        ["rank", "feature_index", "feature_name", "source", "score", "method"],
        [[int(ranks[k]), int(k), matrix.names[k], source_of(matrix.names[k]), format_float(scores[k]), label]
         for k in order],
    )
    summary["top_k"] = cfg.top_k
    with open(out / "summary.txt", "w", encoding="utf-8") as fh:
        for key, value in summary.items():
            fh.write(f"{key}={value}\n")
    return summary


def read_selection(path) -> tuple[str, list[str], list[str]]:
    """Return ``(method, feature_names, sources)`` of a selection file."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    method = rows[0].get("method") if rows else None
    names = [r["feature_name"] for r in rows]
    # trust a recognised source column, else recover the group from the name prefix
    sources = [
        src if (src := (r.get("source") or "").strip()) in REPORT_GROUPS else source_of(r["feature_name"])
        for r in rows
    ]
    return method or Path(path).stem, names, sources


def run_evaluate(matrix_path, selection_path, cfg: RunConfig, out_dir) -> list[dict]:
    matrix = load_matrix(matrix_path)
    _, names, _ = read_selection(selection_path)
    missing = [n for n in names if n not in matrix.names]
    if missing:
        raise ValueError(f"selected features not in matrix: {missing}")
    if not names:
        raise ValueError("selection file lists no features")
    sub = matrix.columns([matrix.names.index(n) for n in names])
    plan = repeated_kfold(sub.shape[0], cfg.folds, cfg.repeats, cfg.seed, y=sub.y, stratify=cfg.stratify)
    rows = []
    pooled = {kind: ([], []) for kind in cfg.classifiers}
    for r, f, train_idx, test_idx in plan.splits():
        norm = fit_normalizer(sub.X, train_idx)
        X_tr, X_te = norm.apply(sub.X[train_idx]), norm.apply(sub.X[test_idx])
        y_tr, y_te = sub.y[train_idx], sub.y[test_idx]
        for kind in cfg.classifiers:
            model = train(kind, X_tr, y_tr, seed=cfg.seed + r * cfg.folds + f)
            rep = evaluate(model, X_te, y_te)
            scores = model.scores(X_te)
            _, auc = roc_auc(scores, y_te)
            pooled[kind][0].append(scores)
            pooled[kind][1].append(y_te)
            rows.append({"repeat": r, "fold": f, "classifier": kind, "accuracy": rep.accuracy,
                         "auc": auc, "sensitivity": rep.sensitivity, "specificity": rep.specificity})
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    metric_keys = ("accuracy", "auc", "sensitivity", "specificity")
    _write_rows(out / "metrics.csv", ["repeat", "fold", "classifier", *metric_keys],
                [[m["repeat"], m["fold"], m["classifier"], *(format_float(m[k]) for k in metric_keys)] for m in rows])
    summary = []
    for kind in cfg.classifiers:
        mine = [m for m in rows if m["classifier"] == kind]
        summary.append([kind, *(format_float(np.mean([m[k] for m in mine])) for k in metric_keys)])
        points, _ = roc_auc(np.concatenate(pooled[kind][0]), np.concatenate(pooled[kind][1]))
        write_roc(points, out / f"roc_{kind}.csv")
    _write_rows(out / "summary.csv", ["classifier", *metric_keys], summary)
    plan.write(out / "folds.csv")
    return rows


def frequency_row(names, sources) -> dict:
    counts = dict.fromkeys(REPORT_GROUPS, 0)
    for name, source in zip(names, sources):
        counts[source if source in counts else "untagged"] += 1
    return {"total": len(names), **counts}


def run_report(selection_paths, out_path) -> list[tuple[str, dict]]:
    table = []
    for path in selection_paths:
        method, names, sources = read_selection(path)
        table.append((method, frequency_row(names, sources)))
    _write_rows(out_path, ["method", "total", *REPORT_GROUPS],
                [[method, row["total"], *(row[g] for g in REPORT_GROUPS)] for method, row in table])
    return table
