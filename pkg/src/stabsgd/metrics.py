"""Evaluation metrics: test error, sparsity, selection stability and
density-resolved selection profiles."""

from __future__ import annotations

import numpy as np

from .data import Dataset
from .losses import predict_margins

__all__ = ["dataset_margins", "test_error", "sparsity_pct", "selected_set",
           "cohens_kappa", "stability_score", "selection_by_density"]


def dataset_margins(w: np.ndarray, data: Dataset) -> np.ndarray:
    """Margins w.x for every sample (cumulative-sum segment reduction)."""
    if len(w) != data.dim:
        raise ValueError("dimension mismatch")
    contrib = w[data.indices] * data.values
    csum = np.concatenate(([0.0], np.cumsum(contrib)))
    return csum[data.indptr[1:]] - csum[data.indptr[:-1]]


def test_error(w: np.ndarray, data: Dataset) -> float:
    """Fraction of samples misclassified by sign(w.x); zero margin -> +1."""
    if data.n == 0:
        raise ValueError("empty dataset")
    preds = predict_margins(dataset_margins(w, data))
    return float(np.mean(preds != data.labels))


def sparsity_pct(w: np.ndarray) -> float:
    """Percentage of nonzero weights, 100 * |{j : w_j != 0}| / p."""
    return 100.0 * np.count_nonzero(w) / len(w)


def selected_set(w: np.ndarray) -> np.ndarray:
    """Indices of features with nonzero weight."""
    return np.flatnonzero(w)


def _as_bool(s, dim: int) -> np.ndarray:
    s = np.asarray(s)
    if s.dtype == np.bool_:
        if s.size != dim:
            raise ValueError("dimension mismatch")
        return s
    mask = np.zeros(dim, dtype=bool)
    mask[s.astype(np.int64)] = True
    return mask


def cohens_kappa(s1, s2, dim: int) -> float:
    """Chance-corrected agreement between two selected-feature sets.

    kappa = (q_o - q_e) / (1 - q_e) from the 2x2 contingency table of
    joint membership. Degenerate marginals (both sets empty or both full)
    give q_e = 1 and are defined as perfect agreement, kappa = 1.
    """
    a = _as_bool(s1, dim)
    b = _as_bool(s2, dim)
    p11 = int(np.sum(a & b))
    p12 = int(np.sum(a & ~b))
    p21 = int(np.sum(~a & b))
    p22 = int(np.sum(~a & ~b))
    q_o = (p11 + p22) / dim
    q_e = ((p11 + p12) * (p11 + p21) + (p12 + p22) * (p21 + p22)) / (dim * dim)
    if q_e == 1.0:
        return 1.0
    return (q_o - q_e) / (1.0 - q_e)


def stability_score(sets, dim: int) -> float:
    """Mean pairwise kappa over all ordered pairs of selected sets."""
    b = len(sets)
    if b < 2:
        raise ValueError("need at least two selected sets")
    masks = [_as_bool(s, dim) for s in sets]
    total = 0.0
    for i in range(b):
        for j in range(b):
            if i != j:
                total += cohens_kappa(masks[i], masks[j], dim)
    return total / (b * (b - 1))


def selection_by_density(s, data: Dataset, bins: int = 20):
    """Selection fraction per feature-density bin.

    Features are bucketed by nonzero fraction (nnz / n) into equal-width
    bins on [0, 1]. Returns (fractions, counts, edges); empty bins report
    fraction 0.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    mask = _as_bool(s, data.dim)
    density = data.nnz_per_feature / max(data.n, 1)
    bidx = np.minimum((density * bins).astype(np.int64), bins - 1)
    counts = np.bincount(bidx, minlength=bins)
    selected = np.bincount(bidx[mask], minlength=bins)
    fractions = np.divide(selected, counts, out=np.zeros(bins), where=counts > 0)
    edges = np.linspace(0.0, 1.0, bins + 1)
    return fractions, counts, edges
