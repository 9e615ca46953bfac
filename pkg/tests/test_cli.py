import csv

import numpy as np
import pytest

from shapga.cli import main
from shapga.config import ConfigError, build_config, read_config
from shapga.dataset import FeatureMatrix, load_matrix, write_matrix
from shapga.estimate import exact_report
from shapga.features import FEATURE_NAMES, Record, write_record
from shapga.synthetic import planted_dataset, simulated_record
from shapga.valuation import ClassifierGame
from shapga.dataset import zscore_normalize


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def planted_file(tmp_path, n=200, d=8, k=3, seed=0, **kw):
    X, y = planted_dataset(n, d, k, seed=seed, **kw)
    path = tmp_path / "matrix.csv"
    write_matrix(FeatureMatrix(X, y, [f"f{i}" for i in range(d)]), path)
    return path


def selection_file(path, names, method="m"):
    with open(path, "w") as fh:
        fh.write("rank,feature_index,feature_name,source,score,method\n")
        for r, n in enumerate(names, 1):
            fh.write(f"{r},0,{n},x,0.0,{method}\n")
    return path


class TestExtract:
    def test_three_records(self, tmp_path):
        d = tmp_path / "recs"
        d.mkdir()
        for k in range(3):
            ecg, abp, pleth = simulated_record(k, label=bool(k % 2))
            write_record(Record(f"r{k}", 250.0, k % 2, ecg, abp, pleth), d / f"r{k}.csv")
        assert main(["extract", str(d), "--out", str(tmp_path / "m.csv")]) == 0
        m = load_matrix(tmp_path / "m.csv")
        assert m.shape == (3, 380) and m.names == FEATURE_NAMES
        assert m.record_ids == ["r0", "r1", "r2"] and m.y.tolist() == [0, 1, 0]

    def test_corrupt_record_skipped(self, tmp_path, caplog):
        d = tmp_path / "recs"
        d.mkdir()
        ecg, abp, pleth = simulated_record(0)
        write_record(Record("ok", 250.0, 1, ecg, abp, pleth), d / "ok.csv")
        (d / "bad.csv").write_text("# fs=250,label=true\nECG_II,ABP,PLETH\n1,oops,3\n")
        assert main(["extract", str(d), "--out", str(tmp_path / "m.csv")]) == 0
        assert load_matrix(tmp_path / "m.csv").shape == (1, 380)
        assert "bad" in caplog.text

    def test_empty_directory(self, tmp_path):
        (tmp_path / "empty").mkdir()
        assert main(["extract", str(tmp_path / "empty"), "--out", str(tmp_path / "m.csv")]) != 0


class TestSelect:
    def test_exact_matches_library(self, tmp_path):
        path = planted_file(tmp_path)
        out = tmp_path / "sel"
        assert main(["select", str(path), "--method", "shapley-exact", "--top-k", "8", "--out", str(out)]) == 0
        norm, _ = zscore_normalize(load_matrix(path))
        ref = exact_report(ClassifierGame(norm, build_config().valuation_config()), norm.names)
        got = [r["feature_name"] for r in rows(out / "selection.csv")]
        assert got == [ref.feature_names[k] for k in np.argsort(ref.ranks())]

    def test_ga_summary_and_budget(self, tmp_path):
        path = planted_file(tmp_path, n=120)
        out = tmp_path / "sel"
        args = ["select", str(path), "--max-coalition-size", "3", "--samples-per-size", "8",
                "--population", "4", "--top-k", "4", "--out", str(out)]
        assert main(args) == 0
        summary = dict(line.split("=", 1) for line in (out / "summary.txt").read_text().splitlines())
        assert int(summary["nu_evaluations"]) <= int(summary["budget"]) == 2 * 8 * 3 * 8
        assert summary["method"] == "shapley-ga(mu=1)"
        sel = rows(out / "selection.csv")
        assert [int(r["rank"]) for r in sel] == [1, 2, 3, 4]

    @pytest.mark.parametrize("method", ["chi2", "mi", "relief"])
    def test_baselines(self, tmp_path, method):
        path = planted_file(tmp_path, n=150, shift=2.0)
        out = tmp_path / method
        assert main(["select", str(path), "--method", method, "--top-k", "3", "--out", str(out)]) == 0
        top = {r["feature_name"] for r in rows(out / "selection.csv")}
        assert top == {"f0", "f1", "f2"}

    @pytest.mark.parametrize("extra", [["--top-k", "0"], ["--top-k", "9"], ["--mu", "-1"],
                                       ["--max-coalition-size", "20"]])
    def test_invalid(self, tmp_path, extra):
        path = planted_file(tmp_path)
        assert main(["select", str(path), *extra, "--out", str(tmp_path / "o")]) == 1

    def test_unknown_method_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["select", str(planted_file(tmp_path)), "--method", "lasso", "--out", str(tmp_path / "o")])
        assert exc.value.code == 1

    def test_missing_matrix(self, tmp_path):
        assert main(["select", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "o")]) == 1

    def test_bad_matrix(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("a,label\n1,1\nnan,0\n")
        assert main(["select", str(p), "--method", "chi2", "--top-k", "1", "--out", str(tmp_path / "o")]) == 1


class TestEvaluate:
    def test_separable(self, tmp_path):
        path = planted_file(tmp_path, n=100, d=4, k=2, separable=True)
        sel = selection_file(tmp_path / "sel.csv", ["f0", "f1"])
        out = tmp_path / "ev"
        assert main(["evaluate", str(path), str(sel), "--folds", "5", "--repeats", "2", "--out", str(out)]) == 0
        metrics = rows(out / "metrics.csv")
        assert len(metrics) == 2 * 5 * 3
        assert all(float(m["accuracy"]) == 1.0 and float(m["auc"]) == 1.0 for m in metrics)
        assert {p.name for p in out.iterdir()} >= {"metrics.csv", "summary.csv", "folds.csv",
                                                   "roc_logistic.csv", "roc_rusboost-lite.csv"}

    def test_permuted_labels_chance(self, tmp_path):
        X, y = planted_dataset(400, 4, 2, seed=0, separable=True)
        y = np.random.default_rng(1).permutation(y)
        path = tmp_path / "m.csv"
        write_matrix(FeatureMatrix(X, y, ["f0", "f1", "f2", "f3"]), path)
        sel = selection_file(tmp_path / "sel.csv", ["f0", "f1"])
        out = tmp_path / "ev"
        assert main(["evaluate", str(path), str(sel), "--classifiers", "logistic", "--out", str(out)]) == 0
        aucs = [float(m["auc"]) for m in rows(out / "metrics.csv")]
        assert 0.35 <= np.mean(aucs) <= 0.65

    def test_unknown_feature(self, tmp_path):
        path = planted_file(tmp_path)
        sel = selection_file(tmp_path / "sel.csv", ["zz"])
        assert main(["evaluate", str(path), str(sel), "--out", str(tmp_path / "ev")]) == 1

    def test_unknown_classifier(self, tmp_path):
        path = planted_file(tmp_path)
        sel = selection_file(tmp_path / "sel.csv", ["f0"])
        assert main(["evaluate", str(path), str(sel), "--classifiers", "svm", "--out", str(tmp_path / "ev")]) == 1


class TestReport:
    def test_rows(self, tmp_path):
        a = selection_file(tmp_path / "a.csv", [f"pleth_wav_D{1 + k % 6}_mean" for k in range(20)], "chi2")
        b = selection_file(
            tmp_path / "b.csv",
            [f"ecg_wav_D1_{k}" for k in range(6)] + [f"pleth_wav_D2_{k}" for k in range(14)],
            "shapley-ga(mu=1)",
        )
        empty = selection_file(tmp_path / "empty.csv", [])
        out = tmp_path / "report.csv"
        assert main(["report", str(a), str(b), str(empty), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "method,total,ECG-wavelet,PLETH-wavelet,ABP-wavelet,ECG-HRV,untagged"
        assert lines[1] == "chi2,20,0,20,0,0,0"
        assert lines[2] == "shapley-ga(mu=1),20,6,14,0,0,0"
        assert lines[3] == "empty,0,0,0,0,0,0"

    def test_untagged(self, tmp_path):
        a = selection_file(tmp_path / "a.csv", ["age", "ecg_hrv_HRV_mean"], "mi")
        main(["report", str(a), "--out", str(tmp_path / "r.csv")])
        assert (tmp_path / "r.csv").read_text().splitlines()[1] == "mi,2,0,0,0,1,1"


class TestConfig:
    def test_file_and_override(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text("# run settings\nmu = 3.5\nmethod = mi\nstratify = false\nclassifiers = logistic, nearest-centroid\n")
        cfg = build_config(p, mu=0.5)
        assert cfg.mu == 0.5 and cfg.method == "mi" and cfg.stratify is False
        assert cfg.classifiers == ("logistic", "nearest-centroid")
        assert read_config(p)["mu"] == 3.5

    @pytest.mark.parametrize("text", ["colour = red\n", "mu = fast\n", "stratify = perhaps\n"])
    def test_rejects(self, tmp_path, text):
        p = tmp_path / "bad.cfg"
        p.write_text(text)
        with pytest.raises(ConfigError):
            build_config(p)

    def test_cli_config_error_exit(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_text("top_k = -3\n")
        path = planted_file(tmp_path)
        assert main(["select", str(path), "--config", str(p), "--out", str(tmp_path / "o")]) == 1

    def test_usage_error_exit(self):
        with pytest.raises(SystemExit) as exc:
            main(["select"])
        assert exc.value.code == 1


def test_simulate(tmp_path):
    assert main(["simulate", "--n", "4", "--seed", "2", "--out", str(tmp_path / "r")]) == 0
    assert len(list((tmp_path / "r").glob("*.csv"))) == 4
