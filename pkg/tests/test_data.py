import numpy as np
import pytest

from linmtl import TaskDataset
from linmtl.data import load_dataset, read_numeric_csv, standardize_columns
from linmtl.errors import ConstantColumnError, ParseError


def test_dataset_shapes_and_properties():
    data = TaskDataset(X=np.ones((5, 2)), Y=np.zeros((5, 3)))
    assert (data.n, data.p, data.k) == (5, 2, 3)


@pytest.mark.parametrize(
    "X, Y",
    [
        (np.ones((4, 2)), np.zeros((5, 2))),  # row mismatch
        (np.ones(4), np.zeros((4, 1))),  # not 2-D
        (np.ones((2, 2)), np.zeros((2, 3))),  # n < k
        (np.ones((4, 0)), np.zeros((4, 1))),  # no features
    ],
)
def test_dataset_rejects_bad_shapes(X, Y):
    with pytest.raises(ValueError):
        TaskDataset(X=X, Y=Y)


def test_dataset_rejects_non_finite():
    X = np.ones((4, 2))
    X[1, 0] = np.nan
    with pytest.raises(ValueError, match="NaN"):
        TaskDataset(X=X, Y=np.zeros((4, 1)))


def test_read_numeric_csv_roundtrip(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("a,b\n1,2\n3.5,-4e2\n")
    header, values = read_numeric_csv(path)
    assert header == ["a", "b"]
    np.testing.assert_array_equal(values, [[1.0, 2.0], [3.5, -400.0]])


def test_read_numeric_csv_reports_bad_cell(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("a,b\n1,2\n3,oops\n")
    with pytest.raises(ParseError) as exc:
        read_numeric_csv(path)
    assert exc.value.row == 3
    assert exc.value.column == 2


def test_read_numeric_csv_reports_ragged_row(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("a,b\n1,2,3\n")
    with pytest.raises(ParseError) as exc:
        read_numeric_csv(path)
    assert exc.value.row == 2


@pytest.mark.parametrize("content", ["", "a,b\n"])
def test_read_numeric_csv_rejects_empty(tmp_path, content):
    path = tmp_path / "d.csv"
    path.write_text(content)
    with pytest.raises(ParseError):
        read_numeric_csv(path)


def test_standardize_columns_zero_mean_unit_variance():
    rng = np.random.default_rng(0)
    out = standardize_columns(rng.uniform(5.0, 9.0, size=(40, 3)))
    np.testing.assert_allclose(out.mean(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(out.std(axis=0), 1.0, atol=1e-12)


def test_standardize_columns_rejects_constant():
    values = np.column_stack([np.arange(5.0), np.full(5, 2.0)])
    with pytest.raises(ConstantColumnError, match=r"\[1\]"):
        standardize_columns(values)


def test_load_dataset_bias_column_survives_standardization(tmp_path):
    path = tmp_path / "d.csv"
    rng = np.random.default_rng(1)
    table = rng.standard_normal((10, 3))
    np.savetxt(path, table, delimiter=",", header="a,b,c", comments="")
    data = load_dataset(path, feature_columns=[0, 1], task_columns=[2], add_bias=True)
    assert data.p == 3
    np.testing.assert_array_equal(data.X[:, -1], 1.0)
    np.testing.assert_allclose(data.X[:, :2].mean(axis=0), 0.0, atol=1e-12)


def test_load_dataset_rejects_overlapping_columns(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("a,b\n1,2\n3,4\n")
    with pytest.raises(ValueError, match="disjoint"):
        load_dataset(path, feature_columns=[0], task_columns=[0])


def test_load_dataset_without_standardization_keeps_values(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("a,b,c\n1,2,3\n4,5,6\n7,8,10\n")
    data = load_dataset(path, feature_columns=[0, 1], task_columns=[2], standardize=False)
    np.testing.assert_array_equal(data.Y[:, 0], [3.0, 6.0, 10.0])
