"""Pure-NumPy burst kernel: the fallback path when numba is unavailable
or disabled via STABSGD_NO_NUMBA=1."""

from __future__ import annotations

import math

import numpy as np

HINGE = 0


def _scale(loss_id, f, y):
    if loss_id == HINGE:
        return -y if f * y < 1.0 else 0.0
    z = f * y
    if z > 0.0:
        e = math.exp(-z)
        return -y * e / (1.0 + e)
    return -y / (1.0 + math.exp(z))


def run_burst(indptr, indices, values, labels, rows, w, eta, loss_id, active):
    """Run len(rows) SGD steps on w in place, restricted to active features.

    Counts one informative update per stored entry of each sample (even when
    the subgradient vanishes). Returns (touched, counts, deltas): the features
    seen at least once, their informative-update counts, and their
    pre-truncation weight changes, in first-touch order.
    """
    k = np.zeros(w.shape[0], dtype=np.int64)
    touched_parts = []
    snap_parts = []
    for r in rows:
        lo, hi = indptr[r], indptr[r + 1]
        idx = indices[lo:hi]
        val = values[lo:hi]
        keep = active[idx]
        if not keep.all():
            idx = idx[keep]
            val = val[keep]
        if idx.size == 0:
            continue
        fresh = k[idx] == 0
        if fresh.any():
            fi = idx[fresh]
            touched_parts.append(fi)
            snap_parts.append(w[fi].copy())
        k[idx] += 1
        f = float(np.dot(w[idx], val))
        g = _scale(loss_id, f, float(labels[r]))
        if g != 0.0:
            w[idx] -= (eta * g) * val
    if touched_parts:
        touched = np.concatenate(touched_parts)
        snap = np.concatenate(snap_parts)
    else:
        touched = np.empty(0, np.int64)
        snap = np.empty(0, np.float64)
    return touched, k[touched], w[touched] - snap
