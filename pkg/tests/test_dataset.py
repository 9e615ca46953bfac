import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shapga.dataset import (
    EmptyMatrixError,
    FeatureMatrix,
    MissingLabelError,
    NonFiniteCellError,
    NonNumericCellError,
    RaggedRowError,
    load_matrix,
    repeated_kfold,
    write_matrix,
    zscore_normalize,
)


def write(tmp_path, text):
    p = tmp_path / "m.csv"
    p.write_text(text)
    return p


class TestLoad:
    def test_small(self, tmp_path):
        m = load_matrix(write(tmp_path, "a,b,label\n1,2,1\n3,4,0\n5,6,true\n"))
        assert m.shape == (3, 2) and m.names == ["a", "b"]
        assert m.y.tolist() == [1, 0, 1]
        assert m.record_ids is None

    def test_record_ids(self, tmp_path):
        m = load_matrix(write(tmp_path, "record_id,x,label\nr1,0.5,false\nr2,1.5,1\n"))
        assert m.record_ids == ["r1", "r2"] and m.names == ["x"]

    def test_nan_location(self, tmp_path):
        with pytest.raises(NonFiniteCellError, match=r"line 3, column 'b'"):
            load_matrix(write(tmp_path, "a,b,label\n1,2,1\n3,nan,0\n"))

    @pytest.mark.parametrize("text, err", [
        ("", EmptyMatrixError),
        ("a,label\n", EmptyMatrixError),
        ("a,b,label\n1,2\n", RaggedRowError),
        ("a,b\n1,2\n", MissingLabelError),
        ("a,label\nx,1\n", NonNumericCellError),
        ("a,label\n1,2\n", NonNumericCellError),
    ])
    def test_errors(self, tmp_path, text, err):
        with pytest.raises(err):
            load_matrix(write(tmp_path, text))

    def test_errors_are_value_errors(self):
        assert issubclass(RaggedRowError, ValueError)

    def test_round_trip(self, tmp_path, rng):
        m = FeatureMatrix(rng.normal(size=(5, 3)), [0, 1, 1, 0, 1], ["p", "q", "r"], ["a", "b", "c", "d", "e"])
        write_matrix(m, tmp_path / "out.csv")
        back = load_matrix(tmp_path / "out.csv")
        assert np.array_equal(back.X, m.X) and back.record_ids == m.record_ids
        assert np.array_equal(back.y, m.y)


class TestZscore:
    def test_worked(self):
        m = FeatureMatrix(np.array([[1.0], [2.0], [3.0]]), [0, 1, 0], ["a"])
        z, _ = zscore_normalize(m)
        np.testing.assert_allclose(z.X[:, 0], [-1.2247448713915890, 0.0, 1.2247448713915890])

    def test_constant_column(self):
        m = FeatureMatrix(np.array([[1.0, 5.0], [2.0, 5.0], [4.0, 5.0]]), [0, 1, 0], ["a", "b"])
        z, norm = zscore_normalize(m)
        assert np.all(z.X[:, 1] == 0.0)
        assert z.constant.tolist() == [False, True]

    def test_train_statistics_only(self, rng):
        X = rng.normal(size=(20, 2))
        X[15:] += 100.0
        m = FeatureMatrix(X, [0, 1] * 10, ["a", "b"])
        train = np.arange(15)
        z, norm = zscore_normalize(m, train)
        np.testing.assert_allclose(norm.mean, X[:15].mean(axis=0))
        np.testing.assert_allclose(z.X[train].mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(z.X[train].std(axis=0), 1.0)
        assert np.all(z.X[15:] > 10)


class TestKfold:
    def test_sizes_220(self):
        plan = repeated_kfold(220, 5, 2, seed=0)
        for _, _, train, test in plan.splits():
            assert (train.size, test.size) == (176, 44)

    def test_small(self):
        assert all(test.size == 2 for *_, test in repeated_kfold(10, 5, 1).splits())

    def test_deterministic_and_repeats_differ(self):
        a = repeated_kfold(50, 5, 2, seed=3)
        b = repeated_kfold(50, 5, 2, seed=3)
        assert all(np.array_equal(x, y) for fa, fb in zip(a.tests, b.tests) for x, y in zip(fa, fb))
        assert not all(np.array_equal(x, y) for x, y in zip(a.tests[0], a.tests[1]))

    def test_stratified_counts(self):
        y = np.array([1] * 20 + [0] * 80)
        for *_, test in repeated_kfold(100, 5, 3, seed=1, y=y).splits():
            assert y[test].sum() == 4

    @pytest.mark.parametrize("args", [(5, 1), (3, 5), (10, 5, 0)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            repeated_kfold(*args)

    def test_write(self, tmp_path):
        repeated_kfold(6, 3, 1).write(tmp_path / "f.csv")
        lines = (tmp_path / "f.csv").read_text().splitlines()
        assert lines[0] == "repeat,fold,test_indices" and len(lines) == 4

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 60), st.integers(2, 8), st.integers(1, 3), st.integers(0, 1000), st.booleans())
    def test_partition(self, n, k, repeats, seed, stratify):
        if k > n:
            return
        y = np.random.default_rng(seed).integers(0, 2, n)
        plan = repeated_kfold(n, k, repeats, seed, y=y, stratify=stratify)
        for folds in plan.tests:
            joined = np.sort(np.concatenate(folds))
            assert np.array_equal(joined, np.arange(n))
            sizes = [f.size for f in folds]
            assert max(sizes) - min(sizes) <= 1
        for _, _, train, test in plan.splits():
            assert np.intersect1d(train, test).size == 0 and train.size + test.size == n
