import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from screentrex.data import Dataset, load_csv, standardize
from screentrex.errors import ConstantColumnError, DataFormatError


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestLoadCsv:
    def test_minimal(self, tmp_path):
        x = write(tmp_path, "x.csv", "1,0\n0,1\n1,1\n")
        y = write(tmp_path, "y.csv", "1\n0\n1\n")
        d = load_csv(x, y)
        assert d.n == 3 and d.p == 2
        assert d.labels == ("V1", "V2")

    def test_header_labels(self, tmp_path):
        x = write(tmp_path, "x.csv", "a,b\n1,0\n0,1\n1,1\n")
        y = write(tmp_path, "y.csv", "1\n0\n1\n")
        d = load_csv(x, y, header=True)
        assert d.labels == ("a", "b")

    def test_dimension_mismatch(self, tmp_path):
        x = write(tmp_path, "x.csv", "1,0\n0,1\n1,1\n0,0\n")
        y = write(tmp_path, "y.csv", "1\n0\n1\n")
        with pytest.raises(DataFormatError, match="mismatch"):
            load_csv(x, y)

    def test_non_numeric_cell_reports_position(self, tmp_path):
        x = write(tmp_path, "x.csv", "1,0\n0,oops\n1,1\n")
        y = write(tmp_path, "y.csv", "1\n0\n1\n")
        with pytest.raises(DataFormatError, match=r"row 2, column 2"):
            load_csv(x, y)

    def test_empty_file(self, tmp_path):
        x = write(tmp_path, "x.csv", "")
        y = write(tmp_path, "y.csv", "1\n0\n1\n")
        with pytest.raises(DataFormatError, match="empty"):
            load_csv(x, y)

    def test_hiv_shape(self, tmp_path):
        # 767 subjects x 201 mutation columns, binary entries
        rng = np.random.default_rng(0)
        x_mat = rng.integers(0, 2, size=(767, 201))
        y_vec = rng.integers(0, 2, size=767)
        x = write(tmp_path, "x.csv",
                  "\n".join(",".join(str(v) for v in row) for row in x_mat) + "\n")
        y = write(tmp_path, "y.csv", "\n".join(str(v) for v in y_vec) + "\n")
        d = load_csv(x, y)
        assert (d.n, d.p) == (767, 201)

    def test_round_trip(self, tmp_path):
        rows = [[1.5, -2.25], [0.125, 3.0], [4.75, 0.0]]
        text = "\n".join(",".join(repr(v) for v in row) for row in rows) + "\n"
        x = write(tmp_path, "x.csv", text)
        y = write(tmp_path, "y.csv", "1.5\n-0.5\n2.25\n")
        d = load_csv(x, y)
        x2 = write(tmp_path, "x2.csv",
                   "\n".join(",".join(repr(float(v)) for v in row) for row in d.x) + "\n")
        d2 = load_csv(x2, y)
        assert np.array_equal(d.x, d2.x)


class TestDatasetInvariants:
    def test_too_few_rows(self):
        with pytest.raises(DataFormatError):
            Dataset(np.ones((2, 2)), np.ones(2), ("a", "b"))

    def test_nonfinite(self):
        x = np.ones((3, 2))
        x[1, 1] = np.nan
        with pytest.raises(DataFormatError):
            Dataset(x, np.ones(3), ("a", "b"))

    def test_duplicate_labels(self):
        with pytest.raises(DataFormatError):
            Dataset(np.eye(3), np.ones(3), ("a", "a", "b"))


class TestStandardize:
    def test_symmetric_column(self):
        d = Dataset(np.array([[1.0], [-1.0], [1.0], [-1.0]]),
                    np.zeros(4), ("a",))
        s = standardize(d)
        assert np.allclose(s.x_std[:, 0], [0.5, -0.5, 0.5, -0.5])

    def test_constant_column_error(self):
        d = Dataset(np.column_stack([np.ones(3) * 2, np.arange(3.0)]),
                    np.ones(3), ("const", "ok"))
        with pytest.raises(ConstantColumnError, match="const"):
            standardize(d)

    def test_random_matrix_oracle(self):
        # oracle: direct recomputation of column means and norms
        rng = np.random.default_rng(3)
        d = Dataset(rng.normal(size=(10, 4)), rng.normal(size=10),
                    tuple("abcd"))
        s = standardize(d)
        assert np.all(np.abs(s.x_std.mean(axis=0)) < 1e-10)
        assert np.all(np.abs(np.linalg.norm(s.x_std, axis=0) - 1) < 1e-10)
        assert abs(s.y_c.mean()) <= 1e-10 * (1 + abs(d.y.mean()))

    def test_invertible(self):
        rng = np.random.default_rng(4)
        d = Dataset(rng.normal(size=(8, 3)), rng.normal(size=8), tuple("abc"))
        s = standardize(d)
        back = s.x_std * s.scale + s.mean
        assert np.allclose(back, d.x, atol=1e-12)

    def test_idempotent(self):
        rng = np.random.default_rng(5)
        d = Dataset(rng.normal(size=(9, 4)), rng.normal(size=9), tuple("abcd"))
        s1 = standardize(d)
        s2 = standardize(s1.as_dataset())
        assert np.allclose(s1.x_std, s2.x_std, atol=1e-10)
        assert np.allclose(s1.y_c, s2.y_c, atol=1e-10)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(4, 12), st.integers(1, 5))
    def test_property_unit_norm_zero_mean(self, seed, n, p):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(n, p)) + rng.normal(size=p)
        d = Dataset(x, rng.normal(size=n),
                    tuple(f"c{j}" for j in range(p)))
        s = standardize(d)
        assert np.all(np.abs(s.x_std.mean(axis=0)) < 1e-10)
        assert np.all(np.abs(np.linalg.norm(s.x_std, axis=0) - 1) < 1e-10)
