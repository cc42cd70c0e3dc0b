"""Synthetic sparse classification data with planted support.

Feature j is nonzero with probability lambda_j (drawn log-uniformly from a
configured density range) and nonzero entries are standard normal. Labels
come from a planted linear model: y = sign(x . w_true + noise), where
w_true has +-1 weights on a small support chosen at evenly spaced density
ranks, so the true signal spans the whole sparsity spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset

__all__ = ["PlantedData", "generate_planted"]


@dataclass(frozen=True)
class PlantedData:
    data: Dataset
    support: np.ndarray       # indices of true features
    w_true: np.ndarray        # dense planted weights
    densities: np.ndarray     # per-feature nonzero probability


def generate_planted(n: int, dim: int, n_true: int,
                     density_range=(0.005, 0.5), noise: float = 0.5,
                     seed: int = 0) -> PlantedData:
    """Draw n samples of dimension dim with n_true planted features."""
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be >= 1")
    if not 0 <= n_true <= dim:
        raise ValueError("n_true must be in [0, dim]")
    lo, hi = density_range
    if not 0.0 < lo <= hi <= 1.0:
        raise ValueError("density_range must satisfy 0 < lo <= hi <= 1")
    if noise < 0.0:
        raise ValueError("noise must be nonnegative")

    rng = np.random.default_rng(seed)
    densities = np.exp(rng.uniform(np.log(lo), np.log(hi), size=dim))

    # support at evenly spaced density ranks: covers sparse through dense
    w_true = np.zeros(dim)
    if n_true > 0:
        ranks = np.argsort(densities)
        picks = ranks[np.linspace(0, dim - 1, n_true).round().astype(int)]
        support = np.sort(picks)
        signs = np.where(rng.random(n_true) < 0.5, -1.0, 1.0)
        w_true[support] = signs
    else:
        support = np.empty(0, np.int64)

    present = rng.random((n, dim)) < densities
    x = np.where(present, rng.standard_normal((n, dim)), 0.0)
    signal = x @ w_true
    y = np.where(signal + noise * rng.standard_normal(n) >= 0.0, 1.0, -1.0)

    indptr = np.zeros(n + 1, np.int64)
    indptr[1:] = np.cumsum(present.sum(axis=1))
    rows, cols = np.nonzero(present)
    dataset = Dataset.from_arrays(dim, y, indptr, cols.astype(np.int64),
                                  x[rows, cols])
    return PlantedData(dataset, support, w_true, densities)
