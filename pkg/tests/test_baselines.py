import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chi2

from shapga.baselines import bin_features, chi2_scores, mi_scores, relief_scores
from shapga.synthetic import planted_dataset


def labels(n, seed=0):
    y = np.random.default_rng(seed).integers(0, 2, n)
    y[:2] = [0, 1]
    return y


class TestBinning:
    def test_equal_width(self):
        B = bin_features(np.array([[0.0], [0.05], [0.5], [0.99], [1.0]]))
        assert B[:, 0].tolist() == [0, 0, 5, 9, 9]

    def test_constant_column(self):
        assert np.all(bin_features(np.full((4, 1), 7.0)) == 0)


class TestChi2:
    def test_label_copy_is_top(self):
        rng = np.random.default_rng(0)
        y = labels(200)
        X = np.column_stack([rng.normal(size=200), y.astype(float), rng.normal(size=200)])
        s = chi2_scores(X, y).scores
        assert int(np.argmax(s)) == 1
        assert s[1] == pytest.approx(200.0)  # 2x2 perfect association gives chi2 = n

    def test_independent_below_critical(self):
        crit = chi2.ppf(0.99, 9)
        passed = 0
        for seed in range(10):
            rng = np.random.default_rng(seed)
            X = rng.normal(size=(500, 1))
            passed += chi2_scores(X, labels(500, seed + 100)).scores[0] < crit
        assert passed >= 9

    def test_constant_zero(self):
        assert chi2_scores(np.ones((20, 1)), labels(20)).scores[0] == 0.0


class TestMI:
    def test_label_copy_is_entropy(self):
        y = labels(300, 3)
        p = y.mean()
        h = -(p * math.log(p) + (1 - p) * math.log(1 - p))
        assert mi_scores(y[:, None].astype(float), y).scores[0] == pytest.approx(h, abs=1e-12)

    def test_independent_small(self):
        passed = 0
        for seed in range(10):
            X = np.random.default_rng(seed).normal(size=(2000, 1))
            passed += mi_scores(X, labels(2000, seed + 50)).scores[0] < 0.02
        assert passed >= 9

    def test_constant_zero(self):
        assert mi_scores(np.ones((20, 1)), labels(20)).scores[0] == 0.0

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(0.1, 50), st.floats(-100, 100))
    def test_affine_invariant(self, seed, a, b):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(60, 3))
        y = labels(60, seed % 1000)
        base = mi_scores(X, y).scores
        np.testing.assert_allclose(mi_scores(a * X + b, y).scores, base, atol=1e-9)


class TestRelief:
    def test_informative_beats_noise(self):
        wins = 0
        for seed in range(10):
            X, y = planted_dataset(200, 6, 1, seed=seed, shift=2.0)
            s = relief_scores(X, y, seed=seed).scores
            wins += s[0] > s[1:].max()
        assert wins >= 9

    def test_duplicated_columns_equal(self):
        X, y = planted_dataset(100, 3, 1, seed=1)
        X = np.column_stack([X, X[:, 0]])
        s = relief_scores(X, y).scores
        assert s[0] == pytest.approx(s[3], abs=1e-12)

    def test_noise_near_zero(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(500, 4))
        s = relief_scores(X, labels(500, 9)).scores
        assert np.all(np.abs(s) < 0.1)

    def test_row_permutation_with_full_sweep(self):
        X, y = planted_dataset(80, 4, 2, seed=2)
        p = np.random.default_rng(1).permutation(80)
        a = relief_scores(X, y, n_iterations=80).scores
        b = relief_scores(X[p], y[p], n_iterations=80).scores
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_needs_both_classes(self):
        with pytest.raises(ValueError):
            relief_scores(np.zeros((5, 2)), np.array([1, 1, 1, 1, 0]))


@pytest.mark.parametrize("scorer", [chi2_scores, mi_scores])
def test_row_permutation_invariant(scorer):
    X, y = planted_dataset(100, 5, 2, seed=4)
    p = np.random.default_rng(0).permutation(100)
    np.testing.assert_allclose(scorer(X[p], y[p]).scores, scorer(X, y).scores, atol=1e-12)


def test_planted_recovery_floor():
    X, y = planted_dataset(300, 30, 5, seed=0)
    for sv in (chi2_scores(X, y), mi_scores(X, y), relief_scores(X, y)):
        top10 = np.argsort(sv.ranks())[:10]
        assert np.sum(top10 < 5) >= 3, sv.method


def test_write(tmp_path):
    sv = chi2_scores(*planted_dataset(60, 3, 1, seed=0))
    sv.write(tmp_path / "s.csv", names=["a", "b", "c"])
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "feature,method,score,rank"
    assert lines[1].startswith("a,chi2,") and lines[1].endswith(",1")
