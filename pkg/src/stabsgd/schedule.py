"""Adaptive gravity and annealing schedules.

The shrinkage intensity is steered by a target rejection rate: the
fraction of per-update average weight magnitudes that should be truncated
away. The rate starts at max_reject while no feature has been purged and
anneals to zero as the active set empties, trading early exploration of
sparse supports for late exploitation with nearly plain SGD. The burst
size can be annealed upward on the same signal.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["anneal_rejection", "rejection_quantile", "adaptive_gravity",
           "anneal_burst_size"]


def anneal_rejection(sparsity: float, max_reject: float, anneal_rate: float) -> float:
    """Rejection rate at a given sparsity level (fraction of purged features).

    Decays from max_reject at sparsity 0 to exactly 0 at sparsity 1.
    anneal_rate > 0 gives exponential decay, 0 linear, < 0 logarithmic
    (slower, keeps the rate high longer).
    """
    if not 0.0 <= sparsity <= 1.0:
        raise ValueError("sparsity must be in [0, 1]")
    if not 0.0 <= max_reject <= 1.0:
        raise ValueError("max_reject must be in [0, 1]")
    if anneal_rate >= 0.0:
        return max_reject * (math.exp(-anneal_rate * sparsity)
                             - sparsity * math.exp(-anneal_rate))
    return max_reject * math.log1p(-anneal_rate * (1.0 - sparsity)) / math.log1p(-anneal_rate)


def rejection_quantile(magnitudes: np.ndarray, reject_rate: float) -> float:
    """Smallest magnitude m with fraction(magnitudes <= m) >= reject_rate.

    The lower empirical quantile of the pooled multiset: the k-th smallest
    element with k = ceil(reject_rate * N). reject_rate 0 returns 0.
    """
    if not 0.0 <= reject_rate <= 1.0:
        raise ValueError("reject_rate must be in [0, 1]")
    mags = np.asarray(magnitudes, dtype=np.float64)
    if mags.size == 0:
        raise ValueError("empty magnitude pool")
    if reject_rate == 0.0:
        return 0.0
    k = int(math.ceil(reject_rate * mags.size))
    k = min(max(k, 1), mags.size)
    return float(np.partition(mags, k - 1)[k - 1])


def adaptive_gravity(records, active: np.ndarray, reject_rate: float,
                     fallback: float) -> float:
    """Base gravity whose induced truncation fraction matches reject_rate.

    records holds one (feature_idx, |delta| / count) pair of arrays per
    burst of the previous stage; only features still in the active set
    contribute. With no informative updates available the fallback gravity
    (previous stage's value, or the configured initial gravity at stage 1)
    is returned.
    """
    pool = [mag[active[idx]] for idx, mag in records]
    pool = [m for m in pool if m.size]
    if not pool:
        return float(fallback)
    return rejection_quantile(np.concatenate(pool), reject_rate)


def anneal_burst_size(density: float, base_size: int, growth: float,
                      cap: int) -> int:
    """Burst size ceil(base_size * log(1 / (growth * density))).

    Clamped below by base_size (the formula goes nonpositive once
    growth * density >= 1) and above by cap; an empty active set
    (density 0) maps straight to the cap. Non-increasing in density.
    """
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must be in [0, 1]")
    if base_size < 1:
        raise ValueError("base_size must be >= 1")
    if growth <= 0.0:
        raise ValueError("growth must be positive")
    if cap < base_size:
        raise ValueError("cap must be >= base_size")
    if density == 0.0:
        return int(cap)
    k = int(math.ceil(base_size * math.log(1.0 / (growth * density))))
    return int(min(cap, max(base_size, k)))
