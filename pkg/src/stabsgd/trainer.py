"""Multi-path stabilized training loop.

Training proceeds in stages. Each of the M logical paths owns a seeded
permutation of the data and consumes it sequentially and cyclically, so
pass accounting is exact. A stage runs bursts_per_stage stable bursts per
path at the current base gravity, then hits a barrier where:

1. burst outcomes are pooled into selection probabilities (with evidence
   carry-over for scarce features),
2. features below the purge threshold leave the active set permanently and
   every path's weights are purged,
3. the rejection rate is re-annealed from the purged fraction and the next
   stage's gravity is taken as its quantile of the pooled per-update
   magnitudes; the burst size is annealed when enabled.

Paths are logically independent within a stage and all reductions happen
in fixed path order, so results are bitwise reproducible for a given
(data, config, seed) regardless of how workers are scheduled.

The returned model is the average of the purged path vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bursts import DivergenceError, SampleStream, burst_stable
from .data import Dataset, path_order, take
from .schedule import adaptive_gravity, anneal_burst_size, anneal_rejection
from .stability import SelectionStats, carryover_probability, purge, stable_set, \
    stage_counts, write_stage_trace

__all__ = ["TrainConfig", "StageRecord", "TrainResult", "make_paths", "train"]


@dataclass
class TrainConfig:
    eta: float = 0.2                # learning rate
    max_reject: float = 0.7         # rejection rate while nothing is purged
    anneal_rate: float = 0.0        # >0 exponential, 0 linear, <0 logarithmic decay
    purge_threshold: float = 0.75   # selection probability needed to stay active
    burst_size: int = 5             # SGD steps per burst (K)
    bursts_per_stage: int = 5       # bursts per path between barriers
    n_paths: int = 16               # parallel permutation paths (M)
    min_evidence: int = 3           # informative units required to judge a feature
    init_gravity: float = 0.0       # stage-1 gravity before any burst records exist
    passes: float | None = 10.0     # equivalent-pass budget per path (None: unbounded)
    max_stages: int = 100_000
    convergence_tol: float = 1e-4   # relative change of the aggregated model
    seed: int = 0
    prob_unit: str = "bursts"       # evidence unit: informative bursts or updates
    anneal_bursts: bool = False     # grow the burst size as the active set shrinks
    burst_growth: float = 1.0
    burst_cap: int = 1000
    record_active: bool = False     # keep the active index set per stage (tests)
    trace_path: str | None = None   # JSONL burst-outcome log

    def __post_init__(self):
        if self.n_paths < 1 or self.bursts_per_stage < 1 or self.burst_size < 1:
            raise ValueError("n_paths, bursts_per_stage and burst_size must be >= 1")
        if self.eta <= 0.0:
            raise ValueError("eta must be positive")
        if not 0.0 <= self.purge_threshold <= 1.0:
            raise ValueError("purge_threshold must be in [0, 1]")
        if self.max_stages < 1:
            raise ValueError("max_stages must be >= 1")
        if self.init_gravity < 0.0:
            raise ValueError("init_gravity must be nonnegative")


@dataclass
class StageRecord:
    stage: int
    reject_rate: float
    gravity: float
    burst_size: int
    active_size: int
    density: float
    wbar_change: float
    path_sparsity: list[float]
    active_idx: np.ndarray | None = field(default=None, repr=False)


@dataclass
class TrainResult:
    w_bar: np.ndarray
    active: np.ndarray              # final stable-set mask
    history: list[StageRecord]
    samples_per_path: int
    converged: bool

    @property
    def active_idx(self) -> np.ndarray:
        return np.flatnonzero(self.active)


def make_paths(data: Dataset, n_paths: int, seed: int) -> list[Dataset]:
    """M deterministic permutations of the data, one per path."""
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    return [take(data, path_order(data.n, seed, m)) for m in range(n_paths)]


def train(data: Dataset, loss, cfg: TrainConfig) -> TrainResult:
    """Run the stabilized training loop; see the module docstring."""
    if data.n == 0:
        raise ValueError("empty dataset")
    n, p = data.n, data.dim
    streams = [SampleStream(data, path_order(n, cfg.seed, m), cycle=True)
               for m in range(cfg.n_paths)]
    weights = np.zeros((cfg.n_paths, p))
    active = np.ones(p, dtype=np.bool_)
    stats = SelectionStats.zeros(p)
    records_prev: list = []
    gravity_prev = cfg.init_gravity
    w_bar_prev = np.zeros(p)
    density_prev = 1.0
    consumed = 0
    budget = int(round(cfg.passes * n)) if cfg.passes is not None else None
    eps = float(np.finfo(np.float64).eps)
    history: list[StageRecord] = []
    converged = False

    trace = open(cfg.trace_path, "w") if cfg.trace_path else None
    try:
        for stage in range(1, cfg.max_stages + 1):
            k_s = (anneal_burst_size(density_prev, cfg.burst_size,
                                     cfg.burst_growth, cfg.burst_cap)
                   if cfg.anneal_bursts else cfg.burst_size)
            if budget is not None and consumed + cfg.bursts_per_stage * k_s > budget:
                break
            reject = anneal_rejection(1.0 - density_prev, cfg.max_reject,
                                      cfg.anneal_rate)
            gravity = adaptive_gravity(records_prev, active, reject,
                                       fallback=gravity_prev)

            stage_bursts = []
            records_cur = []
            for m in range(cfg.n_paths):
                w = weights[m]
                for _ in range(cfg.bursts_per_stage):
                    try:
                        out = burst_stable(w, gravity, active, streams[m],
                                           cfg.eta, k_s, loss)
                    except DivergenceError as exc:
                        raise DivergenceError(
                            f"stage {stage}, path {m}: {exc}") from exc
                    w = out.weights
                    stage_bursts.append(out)
                    # pool only moved weights: zero deltas (vanished hinge
                    # subgradients) say nothing about the truncation scale
                    # and would drag the rejection quantile to zero
                    moved = out.deltas != 0.0
                    records_cur.append(
                        (out.touched[moved],
                         np.abs(out.deltas[moved]) / out.counts[moved]))
                weights[m] = w
            consumed += cfg.bursts_per_stage * k_s
            if trace is not None:
                write_stage_trace(trace, stage, stage_bursts)

            informative, survivals = stage_counts(stage_bursts, p, cfg.prob_unit)
            pi = carryover_probability(stats, informative, survivals,
                                       cfg.min_evidence)
            active = stable_set(pi, cfg.purge_threshold, active)
            weights[:, ~active] = 0.0

            density = float(active.mean())
            w_bar = weights.mean(axis=0)
            change = float(np.linalg.norm(w_bar - w_bar_prev)
                           / max(np.linalg.norm(w_bar_prev), eps))
            history.append(StageRecord(
                stage=stage,
                reject_rate=reject,
                gravity=gravity,
                burst_size=k_s,
                active_size=int(active.sum()),
                density=density,
                wbar_change=change,
                path_sparsity=[float(np.count_nonzero(weights[m]) / p)
                               for m in range(cfg.n_paths)],
                active_idx=np.flatnonzero(active) if cfg.record_active else None,
            ))

            gravity_prev = gravity
            records_prev = records_cur
            density_prev = density
            w_bar_prev = w_bar
            if change < cfg.convergence_tol:
                converged = True
                break
    finally:
        if trace is not None:
            trace.close()

    w_bar = purge(w_bar_prev, active)
    return TrainResult(w_bar=w_bar, active=active, history=history,
                       samples_per_path=consumed, converged=converged)
