"""Label-free hyperparameter tuning on fitted LFR benchmarks.

The observed graph is clustered once with the default parameter, LFR
parameters are estimated from the graph and that clustering, and the
candidate parameters are scored on synthetic LFR graphs whose planted
communities are known. Each synthetic graph votes for its best candidate;
the lower median of the votes is returned.
"""

from __future__ import annotations

import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, Partition
from .lfr import LfrGenerationError, generate_lfr
from .louvain import detect
from .metrics import get_metric
from .objectives import ALGORITHMS, Objective
from .powerlaw import LfrParams, estimate_community_params, estimate_graph_params

log = logging.getLogger(__name__)

# seed stream tags
_LFR, _RUN, _DEFAULT, _EVAL = 0, 1, 2, 3


class TuningError(RuntimeError):
    def __init__(self, message: str, params: LfrParams | dict | None = None):
        super().__init__(message)
        self.params = params


def grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid, rounded so values like 0.1 * 3 print as 0.3."""
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


GRID_PRESETS = {
    "real-gamma": grid(0.0, 2.0, 0.1),
    "synthetic-gamma": grid(0.0, 4.0, 0.2),
    "ilfr-mu": grid(0.0, 1.0, 0.05),
}


def seed_for(master_seed: int, *key: int) -> np.random.SeedSequence:
    """Independent stream for one cell of the experiment grid."""
    return np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))


def _param_key(theta: float) -> int:
    # candidate streams are keyed by value so growing the grid leaves other cells alone
    return int(round(theta * 1_000_000))


@dataclass
class TuneConfig:
    candidates: list[float]
    default: float
    quality: str = "nmi"
    n_graphs: int = 1
    n_runs: int = 1
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if not self.candidates:
            raise ValueError("candidate list is empty")
        if self.n_graphs < 1 or self.n_runs < 1:
            raise ValueError("n_graphs and n_runs must be positive")
        get_metric(self.quality)
        self.candidates = [float(c) for c in self.candidates]


@dataclass
class TuneReport:
    chosen: float
    per_graph_best: list[float]
    quality_table: np.ndarray  # n_graphs x n_candidates mean qualities
    params: LfrParams | None
    default_partition: Partition
    candidates: list[float]
    quality: str
    default: float
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "chosen": self.chosen,
            "default": self.default,
            "quality": self.quality,
            "candidates": list(self.candidates),
            "per_graph_best": list(self.per_graph_best),
            "quality_table": self.quality_table.tolist(),
            "params": self.params.as_dict() if self.params is not None else None,
            "default_communities": self.default_partition.n_communities,
            "notes": list(self.notes),
        }

    def to_text(self) -> str:
        lines = [
            f"chosen: {self.chosen:g}",
            f"default: {self.default:g}",
            f"quality: {self.quality}",
            f"n_graphs: {len(self.per_graph_best)}",
            f"default_communities: {self.default_partition.n_communities}",
        ]
        if self.params is not None:
            lines += [f"lfr.{k}: {v:.6g}" if isinstance(v, float) else f"lfr.{k}: {v}"
                      for k, v in self.params.as_dict().items()]
        lines += [f"note: {n}" for n in self.notes]
        lines.append("per_graph_best: " + " ".join(f"{b:g}" for b in self.per_graph_best))
        if not len(self.quality_table):
            return "\n".join(lines) + "\n"
        lines.append("")
        lines.append("graph " + " ".join(f"{c:>8g}" for c in self.candidates))
        for g, row in enumerate(self.quality_table):
            lines.append(f"{g:>5d} " + " ".join(f"{q:8.4f}" for q in row))
        return "\n".join(lines) + "\n"


def median_param(values) -> float:
    """Median that stays on the grid: the lower middle value for even counts."""
    vals = sorted(values)
    if not vals:
        raise ValueError("median of an empty list")
    return vals[(len(vals) - 1) // 2]


def best_candidate(qualities, candidates, default: float) -> float:
    """Argmax; ties go to the candidate closest to ``default``, then the smaller one."""
    q = np.asarray(qualities, dtype=np.float64)
    top = q.max()
    tied = [c for c, v in zip(candidates, q) if v == top]
    return min(tied, key=lambda c: (abs(c - default), c))


def family_of(algorithm) -> str:
    if isinstance(algorithm, Objective):
        return {"modularity": "louvain", "ppm": "ppm", "ilfr": "ilfr"}[algorithm.kind]
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return algorithm


def mean_quality(graph: Graph, truth: Partition, objective: Objective, n_runs: int, seeds,
                 quality: str = "nmi") -> float:
    """Average quality of ``n_runs`` seeded detection runs against ``truth``."""
    return float(np.mean(run_qualities(graph, truth, objective, seeds[:n_runs], (quality,))[quality]))


def run_qualities(graph: Graph, truth: Partition, objective: Objective, seeds, metrics) -> dict[str, list[float]]:
    fns = {m: get_metric(m) for m in metrics}
    out: dict[str, list[float]] = {m: [] for m in metrics}
    for s in seeds:
        part = detect(graph, objective, s).partition
        for m, fn in fns.items():
            out[m].append(fn(part, truth))
    return out


def _score_graph(args) -> tuple[int, dict[str, np.ndarray]]:
    g, params, family, candidates, n_runs, master_seed, metrics = args
    inst = generate_lfr(params, seed_for(master_seed, _LFR, g))
    base = Objective.for_algorithm(family)
    table = {m: np.empty(len(candidates)) for m in metrics}
    for c, theta in enumerate(candidates):
        seeds = [seed_for(master_seed, _RUN, g, _param_key(theta), r) for r in range(n_runs)]
        scores = run_qualities(inst.graph, inst.ground_truth, base.with_param(theta), seeds, metrics)
        for m in metrics:
            table[m][c] = np.mean(scores[m])
    return g, table


def tune_many(graph: Graph, algorithm, config: TuneConfig, metrics=None) -> dict[str, TuneReport]:
    """Run the tuning loop once and report the choice under several quality functions.

    Detection runs on the synthetic graphs are shared across ``metrics``;
    each report is identical to what ``tune`` gives for that metric alone.
    """
    metrics = tuple(metrics or (config.quality,))
    for m in metrics:
        get_metric(m)
    family = family_of(algorithm)
    base = Objective.for_algorithm(family)
    candidates = list(config.candidates)

    graph_params = estimate_graph_params(graph)
    c0 = detect(graph, base.with_param(config.default), seed_for(config.master_seed, _DEFAULT)).partition
    notes: list[str] = []
    if c0.n_communities == 1:
        msg = "default run found a single community"
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        community_params = estimate_community_params(graph, c0)
    notes += [str(w.message) for w in caught]

    def fallback(reason: str) -> dict[str, TuneReport]:
        notes.append(f"falling back to the default parameter: {reason}")
        empty = np.empty((0, len(candidates)))
        return {m: TuneReport(config.default, [], empty, None, c0, candidates, m, config.default, list(notes))
                for m in metrics}

    try:
        params = LfrParams.from_parts(graph_params, community_params)
    except ValueError as exc:
        if c0.n_communities == 1:
            return fallback(str(exc))
        raise TuningError(f"estimated LFR parameters are invalid: {exc}", {**graph_params, **community_params}) from exc

    if len(candidates) == 1:
        notes.append("single candidate; no synthetic graphs scored")
        table = np.empty((0, 1))
        return {m: TuneReport(candidates[0], [], table, params, c0, candidates, m, config.default, list(notes))
                for m in metrics}

    jobs = [(g, params, family, candidates, config.n_runs, config.master_seed, metrics) for g in range(config.n_graphs)]
    try:
        if config.workers > 1:
            with ProcessPoolExecutor(config.workers) as pool:
                results = list(pool.map(_score_graph, jobs))
        else:
            results = [_score_graph(j) for j in jobs]
    except LfrGenerationError as exc:
        if c0.n_communities == 1:
            return fallback(str(exc))
        raise TuningError(f"LFR generation failed for estimated parameters {params}: {exc}", params) from exc
    results.sort(key=lambda r: r[0])

    reports = {}
    for m in metrics:
        table = np.vstack([r[1][m] for r in results])
        best = [best_candidate(row, candidates, config.default) for row in table]
        reports[m] = TuneReport(median_param(best), best, table, params, c0, candidates, m, config.default, list(notes))
        log.info("tuned %s under %s: %g (votes %s)", family, m, reports[m].chosen, best)
    return reports


def tune(graph: Graph, algorithm, config: TuneConfig) -> TuneReport:
    """Pick a hyperparameter for ``algorithm`` on ``graph`` without ground truth.

    ``algorithm`` is a family name ("louvain", "ppm", "ilfr") or an
    ``Objective`` whose kind selects the family.
    """
    return tune_many(graph, algorithm, config, (config.quality,))[config.quality]
