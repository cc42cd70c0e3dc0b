"""Selection-probability estimation and stable-set purging.

Bursts double as feature screenings: each one reports which features had
informative updates and which of them kept nonzero weight through the
truncation. Pooling those outcomes over all bursts of a stage (across
paths) yields an empirical selection probability per feature; features
falling below a purging threshold are removed permanently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["SelectionStats", "stage_counts", "selection_probability",
           "carryover_probability", "stable_set", "purge",
           "write_stage_trace", "read_trace"]


def stage_counts(bursts, dim: int, prob_unit: str = "bursts"):
    """Aggregate one stage of burst outcomes.

    Returns (informative, survivals): per-feature counts of informative
    units and of bursts survived with nonzero weight. The informative unit
    is the number of informative bursts (prob_unit="bursts") or the total
    number of informative updates (prob_unit="updates"); survivals always
    count bursts.
    """
    if prob_unit not in ("bursts", "updates"):
        raise ValueError(f"unknown prob_unit {prob_unit!r}")
    informative = np.zeros(dim, np.int64)
    survivals = np.zeros(dim, np.int64)
    for b in bursts:
        if prob_unit == "bursts":
            informative[b.touched] += 1
        else:
            informative[b.touched] += b.counts
        survivals[b.touched] += b.survived
    return informative, survivals


def selection_probability(bursts, dim: int) -> np.ndarray:
    """Fraction of informative bursts each feature survived.

    Features with no informative update anywhere in the stage default to
    probability 1: absence of evidence is not evidence for purging.
    """
    informative, survivals = stage_counts(bursts, dim, "bursts")
    pi = np.ones(dim)
    seen = informative > 0
    pi[seen] = survivals[seen] / informative[seen]
    return pi


@dataclass
class SelectionStats:
    """Evidence counters carried across stages.

    count_acc accumulates informative units and survive_acc burst
    survivals. A feature is only evaluated once count_acc exceeds
    min_evidence; counters below that carry over to the next stage,
    counters at or above it reset after being used.
    """

    count_acc: np.ndarray
    survive_acc: np.ndarray
    stage_counts: np.ndarray = field(default=None, repr=False)
    stage_survivals: np.ndarray = field(default=None, repr=False)

    @classmethod
    def zeros(cls, dim: int) -> "SelectionStats":
        return cls(np.zeros(dim, np.int64), np.zeros(dim, np.int64))

    def invariant_ok(self) -> bool:
        return bool(np.all((0 <= self.survive_acc) & (self.survive_acc <= self.count_acc)))


def carryover_probability(stats: SelectionStats, informative, survivals,
                          min_evidence: int) -> np.ndarray:
    """Update carried counters with one stage and return selection probabilities.

    Counters from the previous stage are kept only while they were below
    min_evidence; the probability is survive_acc / count_acc where
    count_acc > min_evidence and 1 elsewhere.
    """
    if min_evidence < 0:
        raise ValueError("min_evidence must be >= 0")
    carry = stats.count_acc < min_evidence
    stats.count_acc = np.where(carry, stats.count_acc, 0) + informative
    stats.survive_acc = np.where(carry, stats.survive_acc, 0) + survivals
    stats.stage_counts = np.asarray(informative)
    stats.stage_survivals = np.asarray(survivals)
    pi = np.ones(stats.count_acc.size)
    ready = stats.count_acc > min_evidence
    pi[ready] = stats.survive_acc[ready] / stats.count_acc[ready]
    return pi


def stable_set(pi: np.ndarray, threshold: float, previous: np.ndarray) -> np.ndarray:
    """Features with pi >= threshold, intersected with the previous set.

    The intersection makes purges permanent: a purged feature receives no
    further updates, so its default probability of 1 must not resurrect it.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must be in [0, 1]")
    return previous & (pi >= threshold)


def purge(w: np.ndarray, active: np.ndarray) -> np.ndarray:
    """Zero every weight outside the active set."""
    return np.where(active, w, 0.0)


def write_stage_trace(fp, stage: int, bursts) -> None:
    """Append one stage of burst outcomes as JSON lines (debug/oracle log)."""
    for i, b in enumerate(bursts):
        rec = {
            "stage": stage,
            "burst": i,
            "idx": b.touched.tolist(),
            "counts": b.counts.tolist(),
            "survived": b.survived.astype(int).tolist(),
            "deltas": b.deltas.tolist(),
        }
        fp.write(json.dumps(rec) + "\n")


def read_trace(fp):
    """Yield burst records written by write_stage_trace."""
    for line in fp:
        line = line.strip()
        if line:
            yield json.loads(line)
