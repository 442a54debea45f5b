"""Default-versus-tuned experiments with significance tests and stability histograms."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .datasets import fetch
from .graph import Graph, Partition, load_edge_list, load_labels
from .metrics import get_metric
from .objectives import ALGORITHMS, Objective
from .stats import SignificanceResult, welch_t_test
from .tuner import _EVAL, GRID_PRESETS, TuneConfig, _param_key, grid, seed_for, tune_many
from .louvain import detect

METRIC_NAMES = ("rand", "jaccard", "nmi")
DEFAULT_GRIDS = {"louvain": "real-gamma", "ppm": "real-gamma", "ilfr": "ilfr-mu"}
T_TEST_RUNS = 100


def parse_grid(text) -> list[float]:
    """A preset name, ``start:stop:step``, or an explicit list of values."""
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    if text in GRID_PRESETS:
        return list(GRID_PRESETS[text])
    parts = str(text).split(":")
    if len(parts) == 3:
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"bad grid {text!r}: need start <= stop and step > 0")
        return grid(start, stop, step)
    if len(parts) == 1:
        return [float(x) for x in str(text).split(",")]
    raise ValueError(f"bad grid {text!r}; use a preset ({', '.join(GRID_PRESETS)}) or start:stop:step")


def default_budget(n: int) -> tuple[int, int, int]:
    """(n_graphs, n_runs, n_runs_eval) by graph size, as used for the published tables."""
    if n <= 200:
        return 1000, 1000, 10_000
    if n <= 2000:
        return 100, 100, 1000
    return 100, 2, 100


@dataclass
class DatasetSpec:
    name: str
    edges: str
    labels: str

    @classmethod
    def from_dict(cls, d: dict, base: Path | None = None) -> "DatasetSpec":
        if "edges" not in d:
            edges, labels = fetch(d["name"], d.get("directory"))
            return cls(d["name"], str(edges), str(labels))
        resolve = (lambda p: str((base / p) if base and not Path(p).is_absolute() else p))
        return cls(d.get("name", Path(d["edges"]).stem), resolve(d["edges"]), resolve(d["labels"]))


@dataclass
class ExperimentSpec:
    """One tuning algorithm evaluated on one or more labeled datasets.

    Unset budgets (``None``) are filled per dataset from ``default_budget``.
    """

    datasets: list[DatasetSpec]
    algorithm: str = "louvain"
    default: float | None = None
    candidates: list[float] | None = None
    metrics: tuple[str, ...] = METRIC_NAMES
    n_graphs: int | None = None
    n_runs: int | None = None
    n_runs_eval: int | None = None
    n_runs_test: int = T_TEST_RUNS
    master_seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.default is None:
            self.default = ALGORITHMS[self.algorithm][2]
        if self.candidates is None:
            self.candidates = parse_grid(DEFAULT_GRIDS[self.algorithm])
        self.metrics = tuple(self.metrics)
        for m in self.metrics:
            get_metric(m)
        if not self.datasets:
            raise ValueError("experiment needs at least one dataset")

    @classmethod
    def from_dict(cls, d: dict, base: Path | None = None) -> "ExperimentSpec":
        d = dict(d)
        datasets = [DatasetSpec.from_dict(x, base) for x in d.pop("datasets")]
        if "grid" in d:
            d["candidates"] = parse_grid(d.pop("grid"))
        known = set(cls.__dataclass_fields__) - {"datasets"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown experiment fields: {', '.join(sorted(unknown))}")
        return cls(datasets, **d)

    @classmethod
    def from_file(cls, path) -> "ExperimentSpec":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh), path.parent)


@dataclass
class ResultRow:
    dataset: str
    algorithm: str
    metric: str
    default_param: float
    default_mean: float
    default_sd: float
    tuned_param: float
    tuned_mean: float
    tuned_sd: float
    t_statistic: float
    p_value: float
    runs: int
    significance: SignificanceResult = field(repr=False, compare=False, default=None)


COLUMNS = ("dataset", "algorithm", "metric", "default_param", "default_mean", "default_sd",
           "tuned_param", "tuned_mean", "tuned_sd", "t_statistic", "p_value", "runs")


def evaluate(graph: Graph, truth: Partition, objective: Objective, n_runs: int, master_seed: int,
             dataset_index: int, metrics) -> dict[str, np.ndarray]:
    """Scores of ``n_runs`` detection runs on the labeled graph itself.

    Seeds come from the evaluation stream, which never overlaps the
    streams the tuner draws from.
    """
    fns = {m: get_metric(m) for m in metrics}
    out = {m: np.empty(n_runs) for m in metrics}
    key = _param_key(objective.param)
    for r in range(n_runs):
        part = detect(graph, objective, seed_for(master_seed, _EVAL, dataset_index, key, r)).partition
        for m, fn in fns.items():
            out[m][r] = fn(part, truth)
    return out


def run_experiment(spec: ExperimentSpec) -> list[ResultRow]:
    rows: list[ResultRow] = []
    base = Objective.for_algorithm(spec.algorithm)
    for di, ds in enumerate(spec.datasets):
        graph = load_edge_list(ds.edges)
        truth = load_labels(ds.labels, graph)
        g_def, r_def, e_def = default_budget(graph.n)
        n_graphs = spec.n_graphs or g_def
        n_runs = spec.n_runs or r_def
        n_eval = spec.n_runs_eval or e_def
        config = TuneConfig(spec.candidates, spec.default, spec.metrics[0], n_graphs, n_runs, spec.master_seed)
        reports = tune_many(graph, spec.algorithm, config, spec.metrics)
        cache: dict[float, dict[str, np.ndarray]] = {}

        def scores(theta: float) -> dict[str, np.ndarray]:
            if theta not in cache:
                cache[theta] = evaluate(graph, truth, base.with_param(theta), n_eval, spec.master_seed, di, spec.metrics)
            return cache[theta]

        for m in spec.metrics:
            chosen = reports[m].chosen
            a, b = scores(spec.default)[m], scores(chosen)[m]
            k = min(spec.n_runs_test, n_eval)
            sig = welch_t_test(a[:k], b[:k]) if k >= 2 else None
            rows.append(ResultRow(
                ds.name, spec.algorithm, m, spec.default, float(a.mean()), float(a.std(ddof=1)) if a.size > 1 else 0.0,
                chosen, float(b.mean()), float(b.std(ddof=1)) if b.size > 1 else 0.0,
                sig.t_statistic if sig else float("nan"), sig.p_value if sig else float("nan"), n_eval, sig,
            ))
    return rows


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
    return buf.getvalue()


def rows_to_text(rows: list[ResultRow]) -> str:
    """Aligned table with the same 6-significant-digit numbers as the CSV."""
    table = [list(COLUMNS)] + [[_fmt(getattr(r, c)) for c in COLUMNS] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(COLUMNS))]
    lines = ["  ".join(cell.rjust(wd) if j >= 3 else cell.ljust(wd) for j, (cell, wd) in enumerate(zip(row, widths)))
             for row in table]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def stability_histogram(per_graph_best, candidates) -> list[tuple[float, int]]:
    """(candidate, count) over the whole grid; counts sum to the number of graphs."""
    counts = Counter(per_graph_best)
    return [(float(c), int(counts.get(c, 0))) for c in candidates]
