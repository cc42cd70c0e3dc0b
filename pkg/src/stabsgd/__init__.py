"""Stabilized truncated SGD for sparse online learning.

A sparse online learning engine that trains L1-regularized linear
classifiers on high-dimensional sparse data. The core loop combines
informative truncation (shrinkage proportional to how often a feature was
actually observed), stability-selection purging across parallel
permutation paths, and a gravity schedule driven by an annealed rejection
rate. Plain SGD, uniform truncated SGD, RDA and FOBOS baselines plus a
benchmark harness are included.
"""

from .baselines import (BaselineConfig, fobos_l1, rda_l1, standard_sgd,
                        truncated_gradient)
from .bursts import (BurstOutput, DivergenceError, SampleStream,
                     StreamExhausted, burst_informative, burst_stable,
                     burst_uniform, sgd_step, soft_threshold)
from .data import (Dataset, LibsvmParseError, Sample, SparseVector,
                   load_libsvm, normalize_unit_variance, parse_libsvm,
                   path_order, permute, serialize_libsvm, split, take,
                   write_libsvm)
from .kernels import BACKEND
from .losses import loss_value, margin, predict, subgradient_scale
from .metrics import (cohens_kappa, selection_by_density, sparsity_pct,
                      stability_score, test_error)
from .schedule import (adaptive_gravity, anneal_burst_size, anneal_rejection,
                       rejection_quantile)
from .stability import (SelectionStats, carryover_probability, purge,
                        selection_probability, stable_set)
from .synth import PlantedData, generate_planted
from .trainer import TrainConfig, TrainResult, make_paths, train

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BaselineConfig", "BurstOutput", "Dataset", "DivergenceError",
    "LibsvmParseError", "PlantedData", "Sample", "SampleStream",
    "SelectionStats", "SparseVector", "StreamExhausted", "TrainConfig",
    "TrainResult", "adaptive_gravity", "anneal_burst_size", "anneal_rejection",
    "burst_informative", "burst_stable", "burst_uniform",
    "carryover_probability", "cohens_kappa", "fobos_l1", "generate_planted",
    "load_libsvm", "loss_value", "make_paths", "margin",
    "normalize_unit_variance", "parse_libsvm", "path_order", "permute",
    "predict", "purge", "rda_l1", "rejection_quantile", "selection_by_density",
    "selection_probability", "serialize_libsvm", "sgd_step", "soft_threshold",
    "sparsity_pct", "split", "stability_score", "stable_set", "standard_sgd",
    "subgradient_scale", "take", "test_error", "train", "truncated_gradient",
    "write_libsvm",
]
