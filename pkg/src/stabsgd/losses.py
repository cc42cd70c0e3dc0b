"""Convex classification losses and their subgradient scales.

Both losses act on the margin f = w.x of a linear predictor. Subgradients
with respect to w factor as G(f, y) * x, so updates touch only the stored
entries of the incoming sample.
"""

from __future__ import annotations

import math

import numpy as np

from .data import SparseVector

__all__ = ["HINGE", "LOGISTIC", "LOSSES", "loss_id", "margin", "loss_value",
           "subgradient_scale", "predict", "predict_margins"]

HINGE = 0
LOGISTIC = 1
LOSSES = {"hinge": HINGE, "logistic": LOGISTIC}


def loss_id(kind) -> int:
    if isinstance(kind, str):
        try:
            return LOSSES[kind]
        except KeyError:
            raise ValueError(f"unknown loss {kind!r}") from None
    if kind in (HINGE, LOGISTIC):
        return int(kind)
    raise ValueError(f"unknown loss {kind!r}")


def margin(w: np.ndarray, x: SparseVector) -> float:
    """Sparse dot product w.x."""
    if len(w) != x.dim:
        raise ValueError(f"dimension mismatch: {len(w)} vs {x.dim}")
    return float(np.dot(w[x.indices], x.values))


def loss_value(kind, f: float, y: float) -> float:
    if kind == "hinge" or kind == HINGE:
        return max(1.0 - f * y, 0.0)
    if kind == "logistic" or kind == LOGISTIC:
        u = -f * y
        if u > 30.0:
            # log(1 + e^u) = u + log1p(e^-u), avoids overflow
            return u + math.log1p(math.exp(-u))
        return math.log1p(math.exp(u))
    raise ValueError(f"unknown loss {kind!r}")


def subgradient_scale(kind, f: float, y: float) -> float:
    """Scalar G with dL/dw = G * x; hinge takes G = 0 at the kink f*y = 1."""
    if kind == "hinge" or kind == HINGE:
        return -y if f * y < 1.0 else 0.0
    if kind == "logistic" or kind == LOGISTIC:
        z = f * y
        if z > 0.0:
            e = math.exp(-z)
            return -y * e / (1.0 + e)
        return -y / (1.0 + math.exp(z))
    raise ValueError(f"unknown loss {kind!r}")


def predict(w: np.ndarray, x: SparseVector) -> int:
    """Sign of the margin; an exact zero margin predicts +1."""
    return 1 if margin(w, x) >= 0.0 else -1


def predict_margins(margins: np.ndarray) -> np.ndarray:
    return np.where(margins >= 0.0, 1.0, -1.0)
