"""Named real-world datasets.

Only Zachary's karate club ships with the package. The others are looked
up as ``<name>.edges`` / ``<name>.labels`` in a data directory (the
``directory`` argument, else ``$COMMTUNE_DATA``) and checked against the
sizes listed in ``MANIFEST``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .graph import Graph, GraphFormatError, Partition, load_edge_list, load_labels

DATA_ENV = "COMMTUNE_DATA"


@dataclass(frozen=True)
class DatasetInfo:
    name: str
    n: int
    m: int
    clusters: int
    mixing: float
    source: str


MANIFEST = {
    d.name: d
    for d in [
        DatasetInfo("karate", 34, 78, 2, 0.128, "Zachary's karate club (bundled)"),
        DatasetInfo("dolphins", 62, 159, 2, 0.038, "Lusseau's dolphin social network"),
        DatasetInfo("football", 115, 613, 11, 0.325, "Division IA college football 2000 season, labels = conferences"),
        DatasetInfo("polbooks", 105, 441, 3, 0.159, "Krebs' books on US politics, labels = political leaning"),
        DatasetInfo("polblogs", 1224, 16715, 2, 0.094, "Adamic-Glance political blogs, largest component"),
        DatasetInfo("eu-core", 986, 16064, 42, 0.664, "SNAP email-Eu-core, largest component, labels = departments"),
        DatasetInfo("cora", 24166, 89157, 70, 0.458, "Cora citation network, labels = topics"),
        DatasetInfo("as", 23752, 58416, 176, 0.561, "Autonomous-systems graph, labels = countries"),
    ]
}


@dataclass
class Dataset:
    name: str
    graph: Graph
    truth: Partition


def expected_files(name: str, directory=None) -> tuple[Path, Path]:
    """Where ``load_dataset`` looks for ``name``."""
    base = Path(directory or os.environ.get(DATA_ENV, "."))
    return base / f"{name}.edges", base / f"{name}.labels"


def fetch(name: str, directory=None) -> tuple[Path, Path]:
    """Return the edge and label paths for ``name`` or explain how to provide them.

    Nothing is downloaded. Each file uses the package formats: one
    ``u v`` pair per line for edges, ``vertex community`` per line for
    labels, integer vertex ids, ``#`` comments allowed.
    """
    if name not in MANIFEST:
        raise KeyError(f"unknown dataset {name!r}; known: {', '.join(MANIFEST)}")
    if name == "karate" and directory is None and DATA_ENV not in os.environ:
        root = resources.files("commtune") / "data"
        return Path(str(root / "karate.edges")), Path(str(root / "karate.labels"))
    edges, labels = expected_files(name, directory)
    missing = [p for p in (edges, labels) if not p.is_file()]
    if missing:
        info = MANIFEST[name]
        raise FileNotFoundError(
            f"dataset {name!r} not found: expected {edges} and {labels} "
            f"({info.source}; n={info.n}, m={info.m}). Place the files there or set ${DATA_ENV}."
        )
    return edges, labels


def load_dataset(name: str, directory=None, validate: bool = True) -> Dataset:
    """Load a named dataset, checking n and m against the manifest."""
    edges, labels = fetch(name, directory)
    graph = load_edge_list(edges)
    if validate:
        info = MANIFEST[name]
        if (graph.n, graph.m) != (info.n, info.m):
            raise GraphFormatError(
                f"expected n={info.n}, m={info.m} for {name}, found n={graph.n}, m={graph.m}", source=str(edges)
            )
    return Dataset(name, graph, load_labels(labels, graph))


def karate() -> Dataset:
    return load_dataset("karate")
