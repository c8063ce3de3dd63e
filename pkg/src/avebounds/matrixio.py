"""Matrix Market file helpers for the CLI."""
from __future__ import annotations

import os

import numpy as np
import scipy.io
import scipy.sparse

from . import numerics


def _read_dense(path):
    # mmread's own missing-file error talks about banners; check first so
    # the user sees the real problem.
    if not os.path.exists(path):
        raise FileNotFoundError(f"no such file: {path}")
    data = scipy.io.mmread(path)
    if scipy.sparse.issparse(data):
        data = data.toarray()
    return data


def load_matrix(path):
    """Read a Matrix Market file as a dense 2-d float array."""
    data = _read_dense(path)
    return numerics.as_matrix(np.asarray(data, dtype=float), str(path))


def load_vector(path):
    """Read a Matrix Market file holding a vector (n x 1, 1 x n or 1-d)."""
    data = _read_dense(path)
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 2:
        if 1 not in arr.shape:
            raise ValueError(f"{path}: expected a vector, got shape {arr.shape}")
        arr = arr.ravel()
    return numerics.as_vector(arr, str(path))


def save_matrix(path, m):
    scipy.io.mmwrite(str(path), np.atleast_2d(np.asarray(m, dtype=float)))


def save_vector(path, v):
    arr = numerics.as_vector(v)
    scipy.io.mmwrite(str(path), arr.reshape(-1, 1))
