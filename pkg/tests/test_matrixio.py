import numpy as np
import pytest
import scipy.io
import scipy.sparse

from avebounds.matrixio import load_matrix, load_vector, save_matrix, save_vector


class TestMatrixRoundTrip:
    def test_dense_matrix(self, tmp_path):
        path = tmp_path / "m.mtx"
        m = np.array([[1.5, -2.0], [0.0, 4.25]])
        save_matrix(path, m)
        assert np.array_equal(load_matrix(path), m)

    def test_sparse_file_loads_dense(self, tmp_path):
        path = tmp_path / "s.mtx"
        sp = scipy.sparse.csr_matrix(np.array([[0.0, 1.0], [2.0, 0.0]]))
        scipy.io.mmwrite(str(path), sp)
        got = load_matrix(path)
        assert isinstance(got, np.ndarray)
        assert np.array_equal(got, [[0.0, 1.0], [2.0, 0.0]])

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_matrix(tmp_path / "absent.mtx")


class TestVectorRoundTrip:
    def test_column_vector(self, tmp_path):
        path = tmp_path / "v.mtx"
        v = np.array([1.0, -2.5, 3.0])
        save_vector(path, v)
        got = load_vector(path)
        assert got.shape == (3,)
        assert np.array_equal(got, v)

    def test_row_vector_accepted(self, tmp_path):
        path = tmp_path / "r.mtx"
        save_matrix(path, np.array([[1.0, 2.0, 3.0]]))
        got = load_vector(path)
        assert np.array_equal(got, [1.0, 2.0, 3.0])

    def test_true_matrix_rejected(self, tmp_path):
        path = tmp_path / "m.mtx"
        save_matrix(path, np.eye(2))
        with pytest.raises(ValueError):
            load_vector(path)
