import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from floodml import preprocess as pp


@pytest.mark.parametrize("n, n_test", [(1319, 264), (340, 68), (5, 1)])
def test_split_sizes(n, n_test):
    tr, te = pp.split_indices(n, 0.8, seed=0)
    assert len(te) == n_test and len(tr) == n - n_test


@pytest.mark.parametrize("n, ratio", [(1, 0.8), (0, 0.5), (10, 0.0), (10, 1.0), (10, 1.2)])
def test_split_rejects(n, ratio):
    with pytest.raises(pp.SplitError):
        pp.split_indices(n, ratio, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10000), st.floats(0.01, 0.99), st.integers(0, 2**32 - 1))
def test_split_partitions(n, ratio, seed):
    tr, te = pp.split_indices(n, ratio, seed)
    assert len(tr) == math.floor(ratio * n)
    assert not set(tr.tolist()) & set(te.tolist())
    assert sorted(np.r_[tr, te].tolist()) == list(range(n))


def test_split_deterministic_and_seed_sensitive():
    X = np.arange(40.0).reshape(20, 2)
    y = np.arange(20) % 2
    a = pp.train_test_split(X, y, 0.8, 11)
    b = pp.train_test_split(X, y, 0.8, 11)
    assert a.train_index.tobytes() == b.train_index.tobytes()
    assert a.X_test.tobytes() == b.X_test.tobytes()
    c = pp.train_test_split(X, y, 0.8, 12)
    assert not np.array_equal(a.train_index, c.train_index)
    np.testing.assert_array_equal(a.X_train, X[a.train_index])


def test_split_csv_round_trip():
    s = pp.train_test_split(np.zeros((7, 1)), np.zeros(7), 0.8, 3)
    buf = io.StringIO()
    pp.write_split_csv(s, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "row_index,partition" and len(lines) == 8
    tr, te = pp.read_split_csv(io.StringIO(buf.getvalue()))
    assert sorted(tr) == sorted(s.train_index.tolist())
    assert sorted(te) == sorted(s.test_index.tolist())


def two_pass_moments(col):
    n = len(col)
    mean = sum(col) / n
    return mean, math.sqrt(sum((v - mean) ** 2 for v in col) / n)


def test_fit_scaler_simple_column():
    sc = pp.fit_scaler([[1.0], [2.0], [3.0]])
    mu, sd = two_pass_moments([1.0, 2.0, 3.0])
    assert sc.means[0] == pytest.approx(mu) == 2.0
    assert sc.stds[0] == pytest.approx(sd) == pytest.approx(0.816496580927726)
    out = pp.transform(sc, [[1.0], [2.0], [3.0]])[:, 0]
    np.testing.assert_allclose(out, [-1.224744871391589, 0.0, 1.224744871391589], atol=1e-4)


def test_constant_column_maps_to_zero():
    sc = pp.fit_scaler([[5.0, 1.0], [5.0, 2.0], [5.0, 3.0]])
    assert sc.stds[0] == 0 and sc.constant.tolist() == [True, False]
    out = pp.transform(sc, [[5.0, 2.0], [7.0, 2.0]])
    assert np.all(np.isfinite(out)) and out[:, 0].tolist() == [0.0, 0.0]


def test_identity_scaler_and_centering():
    sc = pp.ScalerParams(np.zeros(2), np.ones(2), ("a", "b"))
    X = np.array([[1.5, -2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(pp.transform(sc, X), X)
    sc = pp.fit_scaler([[4.0], [4.0]])
    assert pp.transform(sc, [[4.0]])[0, 0] == 0.0


def test_scaler_errors():
    with pytest.raises(pp.ScalerError):
        pp.fit_scaler(np.empty((0, 3)))
    sc = pp.fit_scaler([[1.0, 2.0], [3.0, 4.0]])
    with pytest.raises(pp.ScalerError):
        pp.transform(sc, [[1.0, 2.0, 3.0]])
    with pytest.raises(pp.ScalerError):
        pp.fit_scaler([[1.0]], ["a"], exempt=["b"])


def test_exempt_column_left_alone():
    X = np.array([[0.0, 10.0], [1.0, 20.0], [2.0, 60.0]])
    sc = pp.fit_scaler(X, ["Station", "Annual"], exempt=["Station"])
    out = pp.transform(sc, X)
    np.testing.assert_array_equal(out[:, 0], X[:, 0])
    assert abs(out[:, 1].mean()) < 1e-12
    assert sc.exempt == ("Station",)


finite_matrix = arrays(
    np.float64, st.tuples(st.integers(2, 30), st.integers(1, 6)),
    elements=st.floats(-1e4, 1e4, allow_nan=False, allow_infinity=False),
)


@settings(max_examples=80, deadline=None)
@given(finite_matrix)
def test_scaled_columns_are_standardised_and_invertible(M):
    sc = pp.fit_scaler(M)
    Z = pp.transform(sc, M)
    wide = sc.stds > 1e-6 * np.maximum(1.0, np.abs(sc.means))
    if wide.any():
        assert np.all(np.abs(Z[:, wide].mean(axis=0)) < 1e-9)
        assert np.all(np.abs(Z[:, wide].std(axis=0) - 1.0) < 1e-9)
    back = pp.inverse_transform(sc, Z)
    live = ~sc.constant
    np.testing.assert_allclose(back[:, live], M[:, live], rtol=0, atol=1e-9 * max(1.0, np.abs(M).max()))


def test_scaler_csv_round_trip():
    sc = pp.fit_scaler([[1.0, 0.1], [2.0, 0.7], [4.0, 0.2]], ["a", "b"])
    buf = io.StringIO()
    pp.write_scaler_csv(sc, buf)
    assert buf.getvalue().splitlines()[0] == "column_name,mean,std"
    back = pp.read_scaler_csv(io.StringIO(buf.getvalue()))
    assert back.column_names == ("a", "b")
    assert back.means.tobytes() == sc.means.tobytes()
    assert back.stds.tobytes() == sc.stds.tobytes()
