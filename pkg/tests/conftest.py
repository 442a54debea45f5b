from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from commtune.datasets import karate
from commtune.graph import Graph, Partition

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, title: str, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {criterion:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def karate_data():
    return karate()


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    """G(n, p) with at least one edge."""
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    if not keep.any():
        keep[rng.integers(iu.size)] = True
    return Graph.from_edges(n, np.column_stack([iu[keep], ju[keep]]))


@st.composite
def graphs(draw, min_n: int = 2, max_n: int = 12):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=len(pairs), unique=True))
    return Graph.from_edges(n, np.array(chosen, dtype=np.int64))


@st.composite
def graph_and_partition(draw, min_n: int = 2, max_n: int = 12):
    g = draw(graphs(min_n, max_n))
    labels = draw(st.lists(st.integers(0, g.n - 1), min_size=g.n, max_size=g.n))
    return g, Partition(g, labels)
