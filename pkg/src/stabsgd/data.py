"""Sparse datasets in LIBSVM text format: parsing, scaling, permutation, splits.

Datasets are stored in CSR layout (indptr / indices / values) with labels in
{-1.0, +1.0}. All operations are pure: they return new Dataset objects and
never mutate their inputs, so datasets are safe to share across parallel
training paths.
"""

from __future__ import annotations

import gzip
import io
import os
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LibsvmParseError",
    "SparseVector",
    "Sample",
    "Dataset",
    "sparse_vector",
    "parse_libsvm",
    "load_libsvm",
    "serialize_libsvm",
    "write_libsvm",
    "feature_scales",
    "scale_features",
    "normalize_unit_variance",
    "take",
    "permute",
    "split",
    "path_order",
]


class LibsvmParseError(ValueError):
    """Malformed LIBSVM input. Carries the offending 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class SparseVector:
    """Fixed-dimension vector stored as sorted (index, value) pairs.

    Invariants: indices strictly increasing, all < dim; no stored zeros.
    """

    dim: int
    indices: np.ndarray
    values: np.ndarray

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out


def sparse_vector(dim: int, entries) -> SparseVector:
    """Build a validated SparseVector from (index, value) pairs."""
    if dim < 0:
        raise ValueError("dim must be nonnegative")
    if len(entries) == 0:
        return SparseVector(dim, np.empty(0, np.int64), np.empty(0, np.float64))
    idx = np.asarray([e[0] for e in entries], dtype=np.int64)
    val = np.asarray([e[1] for e in entries], dtype=np.float64)
    order = np.argsort(idx, kind="stable")
    idx, val = idx[order], val[order]
    if idx.size > 1 and np.any(np.diff(idx) == 0):
        raise ValueError("duplicate indices")
    if idx[0] < 0 or idx[-1] >= dim:
        raise ValueError("index out of range")
    if not np.all(np.isfinite(val)):
        raise ValueError("non-finite value")
    keep = val != 0.0
    return SparseVector(dim, idx[keep], val[keep])


@dataclass(frozen=True)
class Sample:
    """One labelled observation; y is exactly -1.0 or +1.0."""

    x: SparseVector
    y: float


@dataclass(frozen=True)
class Dataset:
    """Ordered collection of sparse samples with binary labels.

    nnz_per_feature[j] counts samples holding a stored entry at feature j;
    the column density profile is nnz_per_feature / n.
    """

    dim: int
    labels: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    values: np.ndarray
    nnz_per_feature: np.ndarray

    @property
    def n(self) -> int:
        return int(self.labels.size)

    def row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.values[lo:hi]

    def sample(self, i: int) -> Sample:
        idx, val = self.row(i)
        return Sample(SparseVector(self.dim, idx, val), float(self.labels[i]))

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.dim))
        for i in range(self.n):
            idx, val = self.row(i)
            out[i, idx] = val
        return out

    @classmethod
    def from_arrays(cls, dim, labels, indptr, indices, values) -> "Dataset":
        labels = np.asarray(labels, dtype=np.float64)
        indptr = np.asarray(indptr, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        if indptr.size != labels.size + 1:
            raise ValueError("indptr length must be n + 1")
        if not np.all(np.isin(labels, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        if indices.size and (indices.min() < 0 or indices.max() >= dim):
            raise ValueError("feature index out of range")
        if np.any(values == 0.0):
            raise ValueError("stored zero value")
        if not np.all(np.isfinite(values)):
            raise ValueError("non-finite value")
        for i in range(labels.size):
            seg = indices[indptr[i]:indptr[i + 1]]
            if seg.size > 1 and np.any(np.diff(seg) <= 0):
                raise ValueError(f"row {i}: indices not strictly increasing")
        nnz = np.bincount(indices, minlength=dim).astype(np.int64)
        return cls(dim, labels, indptr, indices, values, nnz)

    @classmethod
    def from_rows(cls, labels, rows, dim) -> "Dataset":
        """Convenience constructor from per-row (index, value) pair lists."""
        vecs = [sparse_vector(dim, r) for r in rows]
        indptr = np.zeros(len(rows) + 1, np.int64)
        indptr[1:] = np.cumsum([v.nnz for v in vecs])
        if vecs:
            indices = np.concatenate([v.indices for v in vecs])
            values = np.concatenate([v.values for v in vecs])
        else:
            indices = np.empty(0, np.int64)
            values = np.empty(0, np.float64)
        return cls.from_arrays(dim, labels, indptr, indices, values)


_LABEL_MAP = {1.0: 1.0, -1.0: -1.0, 0.0: -1.0}


def _open_text(path):
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt")
    return open(path, "r")


def parse_libsvm(source, dim: int | None = None) -> Dataset:
    """Parse LIBSVM text (`<label> <idx>:<val> ...`, indices 1-based).

    Labels 0/1 are mapped to -1/+1; file indices become 0-based. The
    dimension is the largest index seen unless `dim` is given. Stored zero
    values are dropped. Malformed lines, duplicate indices within a line
    and non-finite values raise LibsvmParseError with the line number.
    """
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = [ln.rstrip("\n") for ln in source]

    labels = []
    row_idx: list[np.ndarray] = []
    row_val: list[np.ndarray] = []
    max_index = -1
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            y_raw = float(parts[0])
        except ValueError:
            raise LibsvmParseError(lineno, f"invalid label {parts[0]!r}") from None
        y = _LABEL_MAP.get(y_raw)
        if y is None:
            raise LibsvmParseError(lineno, f"label {parts[0]!r} not in {{-1, 0, +1}}")

        idx = np.empty(len(parts) - 1, np.int64)
        val = np.empty(len(parts) - 1, np.float64)
        for k, tok in enumerate(parts[1:]):
            front, sep, back = tok.partition(":")
            if not sep:
                raise LibsvmParseError(lineno, f"invalid feature token {tok!r}")
            try:
                j = int(front)
                v = float(back)
            except ValueError:
                raise LibsvmParseError(lineno, f"invalid feature token {tok!r}") from None
            if j < 1:
                raise LibsvmParseError(lineno, f"index {j} must be >= 1")
            if not np.isfinite(v):
                raise LibsvmParseError(lineno, f"non-finite value in token {tok!r}")
            idx[k] = j - 1
            val[k] = v
        order = np.argsort(idx, kind="stable")
        idx, val = idx[order], val[order]
        if idx.size > 1 and np.any(np.diff(idx) == 0):
            raise LibsvmParseError(lineno, "duplicate feature index")
        keep = val != 0.0
        idx, val = idx[keep], val[keep]
        if idx.size:
            max_index = max(max_index, int(idx[-1]))
        labels.append(y)
        row_idx.append(idx)
        row_val.append(val)

    inferred = max_index + 1
    if dim is None:
        dim = inferred
    elif dim < inferred:
        raise ValueError(f"dim={dim} smaller than largest index ({inferred})")

    n = len(labels)
    indptr = np.zeros(n + 1, np.int64)
    indptr[1:] = np.cumsum([a.size for a in row_idx])
    indices = np.concatenate(row_idx) if n else np.empty(0, np.int64)
    values = np.concatenate(row_val) if n else np.empty(0, np.float64)
    return Dataset.from_arrays(dim, np.asarray(labels), indptr, indices, values)


def load_libsvm(path, dim: int | None = None) -> Dataset:
    """Read a LIBSVM file; `.gz` suffixes are read transparently."""
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with _open_text(path) as f:
        return parse_libsvm(f, dim=dim)


def serialize_libsvm(data: Dataset) -> str:
    """Render a Dataset back to LIBSVM text (1-based indices, exact floats)."""
    out = io.StringIO()
    for i in range(data.n):
        idx, val = data.row(i)
        label = "+1" if data.labels[i] > 0 else "-1"
        toks = [label]
        toks.extend(f"{int(j) + 1}:{float(v)!r}" for j, v in zip(idx, val))
        out.write(" ".join(toks))
        out.write("\n")
    return out.getvalue()


def write_libsvm(data: Dataset, path) -> None:
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "wt") as f:
        f.write(serialize_libsvm(data))


def feature_scales(data: Dataset) -> np.ndarray:
    """Per-feature 1/sigma_j factors that bring population variance to 1.

    sigma_j is the population standard deviation over all n samples,
    implicit zeros included. Features with sigma_j = 0 get scale 1.
    """
    if data.n == 0:
        raise ValueError("empty dataset")
    n = float(data.n)
    sums = np.bincount(data.indices, weights=data.values, minlength=data.dim)
    sumsq = np.bincount(data.indices, weights=data.values**2, minlength=data.dim)
    var = np.maximum(sumsq / n - (sums / n) ** 2, 0.0)
    sigma = np.sqrt(var)
    safe = np.where(sigma > 0.0, sigma, 1.0)
    return np.where(sigma > 0.0, 1.0 / safe, 1.0)


def scale_features(data: Dataset, scales: np.ndarray) -> Dataset:
    """Multiply each stored entry by its feature scale; sparsity unchanged."""
    values = data.values * scales[data.indices]
    return Dataset(data.dim, data.labels, data.indptr, data.indices, values,
                   data.nnz_per_feature)


def normalize_unit_variance(data: Dataset) -> Dataset:
    """Scale features to unit population variance without centering.

    Centering would densify every sparse column, so only the 1/sigma scale
    is applied; the stored nonzero pattern is preserved exactly.
    """
    return scale_features(data, feature_scales(data))


def take(data: Dataset, rows: np.ndarray) -> Dataset:
    """New Dataset holding the given rows, in the given order."""
    rows = np.asarray(rows, dtype=np.int64)
    lengths = np.diff(data.indptr)
    counts = lengths[rows]
    indptr = np.zeros(rows.size + 1, np.int64)
    indptr[1:] = np.cumsum(counts)
    # gather source ranges without a python loop per row
    if indptr[-1] > 0:
        starts = data.indptr[rows]
        gather = np.repeat(starts - indptr[:-1], counts) + np.arange(indptr[-1])
        indices = data.indices[gather]
        values = data.values[gather]
    else:
        indices = np.empty(0, np.int64)
        values = np.empty(0, np.float64)
    nnz = np.bincount(indices, minlength=data.dim).astype(np.int64)
    return Dataset(data.dim, data.labels[rows], indptr, indices, values, nnz)


def path_order(n: int, seed: int, path: int = 0) -> np.ndarray:
    """Deterministic sample order for one training path.

    Fisher-Yates shuffle from a PCG64 generator seeded by (seed, path), so
    orderings are stable across platforms and distinct across paths.
    """
    if seed < 0 or path < 0:
        raise ValueError("seed and path must be nonnegative")
    rng = np.random.default_rng([seed, path])
    return rng.permutation(n)


def permute(data: Dataset, seed: int) -> Dataset:
    """Seeded deterministic shuffle of the sample order."""
    return take(data, path_order(data.n, seed))


def split(data: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Disjoint random (train, validation) split; train size = round(n * fraction)."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    order = path_order(data.n, seed)
    n_train = int(round(data.n * train_fraction))
    return take(data, order[:n_train]), take(data, order[n_train:])
