"""Reference online learners: plain SGD, truncated SGD, L1 dual averaging
(RDA) and forward-backward splitting (FOBOS).

All four consume a seeded permutation of the data cyclically for a fixed
number of passes and are deterministic given (data, config). Plain and
truncated SGD run through the same burst kernel as the stabilized trainer,
so degenerate configurations of the three agree bitwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bursts import DivergenceError, SampleStream, burst_uniform, soft_threshold
from .data import Dataset, path_order
from .losses import loss_id, subgradient_scale

__all__ = ["BaselineConfig", "standard_sgd", "truncated_gradient",
           "rda_l1", "fobos_l1"]


@dataclass
class BaselineConfig:
    eta: float = 0.2
    passes: float = 10.0
    seed: int = 0
    path: int = 0               # permutation stream id; aligns with trainer paths
    base_gravity: float = 0.005  # truncated: per-update shrinkage unit
    burst_size: int = 5          # truncated: steps per truncation
    l1_penalty: float = 1e-4     # RDA lambda
    dual_scale: float = 5000.0   # RDA gamma
    dual_sparsity: float = 0.005  # RDA rho
    fobos_penalty: float = 1e-4

    def __post_init__(self):
        if self.eta <= 0.0 or self.passes < 0.0:
            raise ValueError("eta must be positive and passes nonnegative")
        if self.burst_size < 1:
            raise ValueError("burst_size must be >= 1")
        if self.dual_scale <= 0.0:
            raise ValueError("dual_scale must be positive")


def _total_steps(data: Dataset, cfg: BaselineConfig) -> int:
    return int(round(cfg.passes * data.n))


def _stream(data: Dataset, cfg: BaselineConfig) -> SampleStream:
    return SampleStream(data, path_order(data.n, cfg.seed, cfg.path), cycle=True)


_CHUNK = 4096


def standard_sgd(data: Dataset, loss, cfg: BaselineConfig) -> np.ndarray:
    """passes * n sequential SGD steps over the seeded permutation."""
    stream = _stream(data, cfg)
    w = np.zeros(data.dim)
    active = np.ones(data.dim, dtype=np.bool_)
    lid = loss_id(loss)
    remaining = _total_steps(data, cfg)
    while remaining > 0:
        rows = stream.take(min(_CHUNK, remaining))
        touched, _, _ = kernels.run_burst(
            data.indptr, data.indices, data.values, data.labels, rows,
            w, float(cfg.eta), lid, active)
        if touched.size and not np.all(np.isfinite(w[touched])):
            raise DivergenceError("non-finite weight in SGD run")
        remaining -= rows.size
    return w


def truncated_gradient(data: Dataset, loss, cfg: BaselineConfig) -> np.ndarray:
    """Uniform-gravity truncated SGD: shrink all weights every burst_size steps.

    Leftover steps past the last whole burst run untruncated, so a zero
    base gravity reproduces standard_sgd exactly for any pass count.
    """
    stream = _stream(data, cfg)
    w = np.zeros(data.dim)
    total = _total_steps(data, cfg)
    n_bursts, leftover = divmod(total, cfg.burst_size)
    for _ in range(n_bursts):
        w = burst_uniform(w, cfg.base_gravity, stream, cfg.eta,
                          cfg.burst_size, loss).weights
    if leftover:
        active = np.ones(data.dim, dtype=np.bool_)
        rows = stream.take(leftover)
        kernels.run_burst(data.indptr, data.indices, data.values, data.labels,
                          rows, w, float(cfg.eta), loss_id(loss), active)
    return w


def _rda_weight(gbar_j: float, t: float, lam_t: float, dual_scale: float) -> float:
    if abs(gbar_j) <= lam_t:
        return 0.0
    return -(math.sqrt(t) / dual_scale) * (gbar_j - lam_t * math.copysign(1.0, gbar_j))


def rda_l1(data: Dataset, loss, cfg: BaselineConfig) -> np.ndarray:
    """L1 regularized dual averaging.

    Keeps the running mean of all subgradients and rebuilds weights from
    the closed form w_j = -(sqrt(t)/gamma) * (gbar_j - lam_t * sign(gbar_j))
    with threshold lam_t = lambda + gamma * rho / sqrt(t). Coordinates are
    materialized lazily (the mean determines every weight), so each step
    costs O(nnz).
    """
    stream = _stream(data, cfg)
    cum = np.zeros(data.dim)  # running subgradient sum; mean is cum / t
    lid = loss_id(loss)
    total = _total_steps(data, cfg)
    lam, scale, rho = cfg.l1_penalty, cfg.dual_scale, cfg.dual_sparsity
    for t in range(1, total + 1):
        r = int(stream.take(1)[0])
        lo, hi = data.indptr[r], data.indptr[r + 1]
        idx = data.indices[lo:hi]
        val = data.values[lo:hi]
        if t == 1:
            f = 0.0
        else:
            tp = t - 1
            lam_tp = lam + scale * rho / math.sqrt(tp)
            gbar = cum[idx] / tp
            w_idx = np.array([_rda_weight(g, tp, lam_tp, scale) for g in gbar])
            f = float(np.dot(w_idx, val))
        g = subgradient_scale(lid, f, float(data.labels[r]))
        if g != 0.0:
            cum[idx] += g * val
    if total == 0:
        return np.zeros(data.dim)
    lam_t = lam + scale * rho / math.sqrt(total)
    gbar = cum / total
    w = np.zeros(data.dim)
    nz = np.abs(gbar) > lam_t
    w[nz] = -(math.sqrt(total) / scale) * (gbar[nz] - lam_t * np.sign(gbar[nz]))
    return w


def fobos_l1(data: Dataset, loss, cfg: BaselineConfig) -> np.ndarray:
    """Forward-backward splitting with L1 prox and eta_t = 1 / sqrt(t).

    Each step takes an SGD step at rate 1/sqrt(t) and then soft-thresholds
    by lambda / sqrt(t + 1) (the interim rate). Successive thresholds
    compose additively on untouched coordinates, so shrinkage is applied
    lazily when a coordinate is next observed; results match the dense
    per-step recursion exactly.
    """
    stream = _stream(data, cfg)
    w = np.zeros(data.dim)
    lid = loss_id(loss)
    total = _total_steps(data, cfg)
    lam = cfg.fobos_penalty
    shrink_cum = 0.0                       # sum of thresholds applied so far
    pending = np.zeros(data.dim)           # shrink_cum at last materialization
    for t in range(1, total + 1):
        r = int(stream.take(1)[0])
        lo, hi = data.indptr[r], data.indptr[r + 1]
        idx = data.indices[lo:hi]
        val = data.values[lo:hi]
        if idx.size:
            w[idx] = soft_threshold(w[idx], shrink_cum - pending[idx])
            pending[idx] = shrink_cum
            f = float(np.dot(w[idx], val))
        else:
            f = 0.0
        g = subgradient_scale(lid, f, float(data.labels[r]))
        if g != 0.0:
            w[idx] -= (g / math.sqrt(t)) * val
            if not np.all(np.isfinite(w[idx])):
                raise DivergenceError("non-finite weight in FOBOS run")
        shrink_cum += lam / math.sqrt(t + 1.0)
    w = soft_threshold(w, shrink_cum - pending)
    return w
