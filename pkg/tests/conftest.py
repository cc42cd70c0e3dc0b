import numpy as np
import pytest

from stabsgd.data import Dataset


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def dense_dataset(n, p, seed=0):
    """Fully dense random dataset (every entry stored and nonzero)."""
    r = np.random.default_rng(seed)
    x = r.standard_normal((n, p))
    x[x == 0.0] = 1.0
    labels = np.where(r.random(n) < 0.5, 1.0, -1.0)
    indptr = np.arange(n + 1, dtype=np.int64) * p
    indices = np.tile(np.arange(p, dtype=np.int64), n)
    return Dataset.from_arrays(p, labels, indptr, indices, x.ravel())


def sparse_dataset(n, p, density=0.1, seed=0):
    """Random sparse dataset with iid Bernoulli(density) support."""
    r = np.random.default_rng(seed)
    present = r.random((n, p)) < density
    x = np.where(present, r.standard_normal((n, p)), 0.0)
    x[present & (x == 0.0)] = 1.0
    labels = np.where(r.random(n) < 0.5, 1.0, -1.0)
    indptr = np.zeros(n + 1, np.int64)
    indptr[1:] = np.cumsum(present.sum(axis=1))
    rows, cols = np.nonzero(present)
    return Dataset.from_arrays(p, labels, indptr, cols.astype(np.int64), x[rows, cols])
