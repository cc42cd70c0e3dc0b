"""Soft thresholding and truncated SGD bursts.

A burst is K consecutive SGD steps followed by one soft-threshold
truncation. Three variants are provided:

* uniform      - every coordinate is shrunk by base_gravity * K;
* informative  - coordinate j is shrunk by base_gravity * counts[j], where
  counts[j] is the number of burst samples holding a stored entry at j, so
  rarely observed features are not penalized for data scarcity;
* stable       - informative, restricted to an active feature set; weights,
  updates and counters outside the set stay exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .data import Dataset, Sample
from .losses import loss_id, margin, subgradient_scale

__all__ = ["StreamExhausted", "DivergenceError", "SampleStream", "BurstOutput",
           "soft_threshold", "sgd_step", "burst_uniform", "burst_informative",
           "burst_stable", "as_mask"]


class StreamExhausted(RuntimeError):
    """A non-cyclic sample stream ran out before a burst finished."""


class DivergenceError(FloatingPointError):
    """Weights left the finite range during an update."""


class SampleStream:
    """Cursor over a dataset in a fixed sample order.

    `take(k)` yields the next k row ids. With cycle=True the order wraps
    around indefinitely, which makes equivalent-pass accounting exact.
    """

    def __init__(self, data: Dataset, order=None, cycle: bool = False):
        self.data = data
        self.order = (np.arange(data.n, dtype=np.int64) if order is None
                      else np.asarray(order, dtype=np.int64))
        self.cycle = cycle
        self.pos = 0

    def take(self, k: int) -> np.ndarray:
        n = self.order.size
        if self.cycle:
            rows = self.order[(self.pos + np.arange(k, dtype=np.int64)) % n]
            self.pos = (self.pos + k) % n
            return rows
        if self.pos + k > n:
            raise StreamExhausted(f"requested {k} samples, {n - self.pos} remain")
        rows = self.order[self.pos:self.pos + k]
        self.pos += k
        return rows


@dataclass
class BurstOutput:
    """Result of one burst.

    weights is the full post-truncation vector. The remaining fields are
    compact views over `touched`, the features with at least one
    informative update (counts > 0), in first-touch order:
    counts (informative updates), deltas (pre-truncation weight change)
    and survived (nonzero weight after truncation).
    """

    weights: np.ndarray
    touched: np.ndarray
    counts: np.ndarray
    deltas: np.ndarray
    survived: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.weights.size)

    def counts_dense(self) -> np.ndarray:
        out = np.zeros(self.dim, np.int64)
        out[self.touched] = self.counts
        return out

    def deltas_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.touched] = self.deltas
        return out


def soft_threshold(w, gravity):
    """Componentwise sign(w) * max(|w| - gravity, 0); zero stays zero."""
    g = np.asarray(gravity, dtype=np.float64)
    if np.any(g < 0.0):
        raise ValueError("gravity must be nonnegative")
    w = np.asarray(w, dtype=np.float64)
    return np.sign(w) * np.maximum(np.abs(w) - g, 0.0)


def sgd_step(w: np.ndarray, z: Sample, eta: float, loss="hinge") -> np.ndarray:
    """One subgradient step w - eta * G * x; only stored entries change."""
    if eta <= 0.0:
        raise ValueError("eta must be positive")
    g = subgradient_scale(loss, margin(w, z.x), z.y)
    out = np.array(w, dtype=np.float64, copy=True)
    if g != 0.0:
        with np.errstate(over="ignore"):
            out[z.x.indices] -= (eta * g) * z.x.values
        if not np.all(np.isfinite(out[z.x.indices])):
            raise DivergenceError("non-finite weight after update")
    return out


def as_mask(active, dim: int) -> np.ndarray:
    """Canonicalize an index set / boolean mask to a boolean mask."""
    active = np.asarray(active)
    if active.dtype == np.bool_:
        if active.size != dim:
            raise ValueError("mask length mismatch")
        return active
    mask = np.zeros(dim, dtype=np.bool_)
    mask[active.astype(np.int64)] = True
    return mask


def _run(w0, base_gravity, stream, eta, k, loss, active, uniform):
    if base_gravity < 0.0:
        raise ValueError("base gravity must be nonnegative")
    if k < 1:
        raise ValueError("burst size must be >= 1")
    d = stream.data
    rows = stream.take(k)
    w = np.where(active, w0, 0.0)
    touched, counts, deltas = kernels.run_burst(
        d.indptr, d.indices, d.values, d.labels, rows,
        w, float(eta), loss_id(loss), active)
    if touched.size and not np.all(np.isfinite(w[touched])):
        raise DivergenceError("non-finite weight inside burst")
    if uniform:
        w = soft_threshold(w, base_gravity * k)
    elif touched.size:
        w[touched] = soft_threshold(w[touched], base_gravity * counts)
    survived = np.abs(w[touched]) > 0.0
    return BurstOutput(w, touched, counts, deltas, survived)


def burst_uniform(w0, base_gravity, stream, eta, k, loss="hinge") -> BurstOutput:
    """K steps, then shrink every coordinate by base_gravity * K.

    Informative counts are still recorded for diagnostics. base_gravity = 0
    reduces to plain SGD.
    """
    active = np.ones(len(w0), dtype=np.bool_)
    return _run(w0, base_gravity, stream, eta, k, loss, active, uniform=True)


def burst_informative(w0, base_gravity, stream, eta, k, loss="hinge") -> BurstOutput:
    """K steps, then shrink feature j by base_gravity * counts[j].

    Features never observed in the burst keep their incoming weight,
    untouched and untruncated. On fully dense data this coincides with
    burst_uniform exactly.
    """
    active = np.ones(len(w0), dtype=np.bool_)
    return _run(w0, base_gravity, stream, eta, k, loss, active, uniform=False)


def burst_stable(w0, base_gravity, active, stream, eta, k, loss="hinge") -> BurstOutput:
    """Informative burst restricted to an active feature set.

    Samples are projected onto the active set; outputs are expanded back to
    full length with exact zeros outside it.
    """
    mask = as_mask(active, len(w0))
    return _run(w0, base_gravity, stream, eta, k, loss, mask, uniform=False)
