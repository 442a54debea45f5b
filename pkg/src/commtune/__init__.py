"""Label-free hyperparameter tuning for community detection.

Louvain-style optimizers for modularity, planted-partition and ILFR
likelihoods, an LFR benchmark generator, and the tuner that fits an LFR
model to an observed graph and picks the parameter that works best on it.
"""

from __future__ import annotations

from .graph import (
    Graph,
    GraphFormatError,
    Partition,
    aggregate,
    load_edge_list,
    load_labels,
    mixing_fraction,
    write_edge_list,
    write_labels,
)
from .lfr import InfeasibleParametersError, LfrGenerationError, LfrInstance, generate_lfr
from .louvain import DetectionResult, detect
from .metrics import jaccard_index, nmi, pair_counts, rand_index
from .objectives import Objective, move_gain, value
from .powerlaw import LfrParams, estimate_community_params, estimate_graph_params, fit_powerlaw_exponent
from .stats import SignificanceResult, welch_t_test
from .tuner import GRID_PRESETS, TuneConfig, TuneReport, TuningError, tune, tune_many

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphFormatError", "Partition", "aggregate", "load_edge_list", "load_labels",
    "mixing_fraction", "write_edge_list", "write_labels",
    "InfeasibleParametersError", "LfrGenerationError", "LfrInstance", "generate_lfr",
    "DetectionResult", "detect",
    "jaccard_index", "nmi", "pair_counts", "rand_index",
    "Objective", "move_gain", "value",
    "LfrParams", "estimate_community_params", "estimate_graph_params", "fit_powerlaw_exponent",
    "SignificanceResult", "welch_t_test",
    "GRID_PRESETS", "TuneConfig", "TuneReport", "TuningError", "tune", "tune_many",
]
