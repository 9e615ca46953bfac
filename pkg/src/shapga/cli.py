"""Command line entry point: ``shapga {extract,select,evaluate,report,simulate}``.

Exit codes: 0 success, 1 validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import METHODS, ConfigError, build_config
from .pipeline import run_evaluate, run_extract, run_report, run_select

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2
log = logging.getLogger("shapga")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _run_options(p):
    p.add_argument("--config", help="key = value run configuration file")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--mu", type=float)
    p.add_argument("--max-coalition-size", type=int)
    p.add_argument("--samples-per-size", type=int)
    p.add_argument("--population", type=int, dest="population_size")
    p.add_argument("--top-k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shapga", description="Shapley-value feature selection with a GA coalition sampler.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="records directory -> 380-feature matrix")
    p.add_argument("records")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("select", help="rank features and keep the top k")
    p.add_argument("matrix")
    _run_options(p)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("evaluate", help="repeated k-fold evaluation of a selection")
    p.add_argument("matrix")
    p.add_argument("selection")
    p.add_argument("--config")
    p.add_argument("--classifiers", help="comma-separated classifier kinds")
    p.add_argument("--folds", type=int)
    p.add_argument("--repeats", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("report", help="source-group frequency table of selections")
    p.add_argument("selections", nargs="+")
    p.add_argument("--out", required=True)

    p = sub.add_parser("simulate", help="write synthetic three-channel records")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--positive-rate", type=float, default=0.25)
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _simulate(args):
    import numpy as np

    from .features.extract import Record, write_record
    from .synthetic import simulated_record

    if args.n < 1:
        raise ValueError("--n must be positive")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    labels = rng.random(args.n) < args.positive_rate
    for k, label in enumerate(labels):
        ecg, abp, pleth = simulated_record(args.seed * 100003 + k, label=bool(label))
        write_record(Record(f"rec{k:04d}", 250.0, int(label), ecg, abp, pleth), out / f"rec{k:04d}.csv")
    print(f"wrote {args.n} records to {out}")


def _dispatch(args):
    if args.command == "extract":
        matrix = run_extract(args.records, args.out, args.workers)
        print(f"extracted {matrix.shape[0]} records x {matrix.shape[1]} features -> {args.out}")
    elif args.command == "select":
        overrides = {k: getattr(args, k) for k in ("method", "mu", "max_coalition_size", "samples_per_size",
                                                    "population_size", "top_k", "seed", "workers")}
        cfg = build_config(args.config, **overrides)
        summary = run_select(args.matrix, cfg, args.out)
        for key, value in summary.items():
            print(f"{key}={value}")
    elif args.command == "evaluate":
        classifiers = tuple(c.strip() for c in args.classifiers.split(",")) if args.classifiers else None
        cfg = build_config(args.config, classifiers=classifiers, folds=args.folds,
                           repeats=args.repeats, seed=args.seed)
        rows = run_evaluate(args.matrix, args.selection, cfg, args.out)
        print(f"{len(rows)} fold metrics -> {args.out}")
    elif args.command == "report":
        table = run_report(args.selections, args.out)
        for method, row in table:
            print(method, *row.values())
    elif args.command == "simulate":
        _simulate(args)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _dispatch(args)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
