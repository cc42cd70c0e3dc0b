import math

import numpy as np
import pytest

from stabsgd.data import sparse_vector
from stabsgd.losses import (loss_value, margin, predict, subgradient_scale)


def test_margin_examples():
    w = np.array([1.0, 2.0, 0.0])
    assert margin(w, sparse_vector(3, [(1, 3.0)])) == 6.0
    assert margin(w, sparse_vector(3, [])) == 0.0
    assert margin(np.zeros(3), sparse_vector(3, [(0, 5.0)])) == 0.0


def test_margin_dimension_mismatch():
    with pytest.raises(ValueError):
        margin(np.zeros(2), sparse_vector(3, [(1, 1.0)]))


def test_loss_values():
    assert loss_value("hinge", 0.5, 1.0) == 0.5
    assert loss_value("hinge", 2.0, 1.0) == 0.0
    assert abs(loss_value("logistic", 0.0, 1.0) - math.log(2.0)) < 1e-15
    assert abs(loss_value("logistic", 0.0, -1.0) - math.log(2.0)) < 1e-15


def test_logistic_overflow_safe():
    # far on the wrong side: loss ~ |f|, no overflow
    v = loss_value("logistic", -1000.0, 1.0)
    assert math.isfinite(v) and abs(v - 1000.0) < 1e-9
    assert loss_value("logistic", 1000.0, 1.0) == 0.0
    g = subgradient_scale("logistic", 1000.0, 1.0)
    assert g == 0.0
    g = subgradient_scale("logistic", -1000.0, 1.0)
    assert abs(g + 1.0) < 1e-12


def test_subgradient_scales():
    assert subgradient_scale("hinge", 0.0, 1.0) == -1.0
    assert subgradient_scale("hinge", 1.0, 1.0) == 0.0  # kink convention
    assert subgradient_scale("logistic", 0.0, 1.0) == -0.5


def test_subgradient_zero_iff_hinge_inactive():
    rng = np.random.default_rng(0)
    for _ in range(200):
        f = float(rng.uniform(-3, 3))
        y = 1.0 if rng.random() < 0.5 else -1.0
        g = subgradient_scale("hinge", f, y)
        if f * y > 1.0:
            assert g == 0.0 and loss_value("hinge", f, y) == 0.0
        elif f * y < 1.0:
            assert g == -y and loss_value("hinge", f, y) > 0.0


def test_finite_difference_small():
    rng = np.random.default_rng(1)
    h = 1e-6
    for _ in range(300):
        kind = "hinge" if rng.random() < 0.5 else "logistic"
        f = float(rng.uniform(-2, 2))
        y = 1.0 if rng.random() < 0.5 else -1.0
        if kind == "hinge" and abs(1.0 - f * y) < 1e-3:
            continue
        fd = (loss_value(kind, f + h, y) - loss_value(kind, f - h, y)) / (2 * h)
        assert abs(fd - subgradient_scale(kind, f, y)) < 1e-5


def test_predict_convention():
    w = np.array([1.0])
    assert predict(w, sparse_vector(1, [(0, 3.0)])) == 1
    assert predict(w, sparse_vector(1, [(0, -0.1)])) == -1
    assert predict(np.zeros(1), sparse_vector(1, [(0, 1.0)])) == 1  # zero margin

def test_unknown_loss():
    with pytest.raises(ValueError):
        loss_value("squared", 1.0, 1.0)
    with pytest.raises(ValueError):
        subgradient_scale("squared", 1.0, 1.0)
