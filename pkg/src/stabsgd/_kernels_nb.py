"""Numba-compiled burst kernel (the default hot path)."""

from __future__ import annotations

import math

import numpy as np
from numba import njit

HINGE = 0


@njit(cache=True)
def _scale(loss_id, f, y):
    if loss_id == HINGE:
        if f * y < 1.0:
            return -y
        return 0.0
    z = f * y
    if z > 0.0:
        e = math.exp(-z)
        return -y * e / (1.0 + e)
    return -y / (1.0 + math.exp(z))


@njit(cache=True)
def run_burst(indptr, indices, values, labels, rows, w, eta, loss_id, active):
    # Capacity bound: a feature enters the touched list at most once, and
    # only when it appears in some row, so total row nnz is enough.
    cap = 0
    for r in rows:
        cap += indptr[r + 1] - indptr[r]
    touched = np.empty(cap, np.int64)
    snap = np.empty(cap, np.float64)
    k = np.zeros(w.shape[0], np.int64)
    n_t = 0
    for r in rows:
        lo = indptr[r]
        hi = indptr[r + 1]
        f = 0.0
        for e in range(lo, hi):
            j = indices[e]
            if active[j]:
                f += w[j] * values[e]
        g = _scale(loss_id, f, labels[r])
        for e in range(lo, hi):
            j = indices[e]
            if active[j]:
                if k[j] == 0:
                    touched[n_t] = j
                    snap[n_t] = w[j]
                    n_t += 1
                k[j] += 1
                if g != 0.0:
                    w[j] -= eta * g * values[e]
    out_touched = touched[:n_t].copy()
    counts = np.empty(n_t, np.int64)
    deltas = np.empty(n_t, np.float64)
    for i in range(n_t):
        j = out_touched[i]
        counts[i] = k[j]
        deltas[i] = w[j] - snap[i]
    return out_touched, counts, deltas
