from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commtune.graph import Graph, Partition
from commtune.louvain import detect, local_move_phase, make_rng
from commtune.metrics import get_metric
from commtune.objectives import Objective, value

from .conftest import graphs


def set_partitions(n: int):
    """Restricted growth strings: every partition of range(n) exactly once."""
    def rec(prefix, top):
        if len(prefix) == n:
            yield list(prefix)
            return
        for c in range(top + 2):
            yield from rec(prefix + [c], max(top, c))
    yield from rec([0], 0)


def best_value(graph: Graph, obj: Objective) -> float:
    return max(value(obj, graph, Partition(graph, lab)) for lab in set_partitions(graph.n))


def cliques(k: int, size: int, ring: bool = False) -> Graph:
    edges = []
    for c in range(k):
        base = c * size
        edges += [(base + i, base + j) for i, j in itertools.combinations(range(size), 2)]
        if ring:
            edges.append((base, ((c + 1) % k) * size + 1))
    return Graph.from_edges(k * size, edges)


def test_two_disjoint_cliques():
    g = cliques(2, 4)
    res = detect(g, Objective.modularity(), seed=1)
    assert res.partition.n_communities == 2
    assert res.objective_value == pytest.approx(best_value(g, Objective.modularity()))


def test_complete_graph_stays_whole():
    g = cliques(1, 5)
    res = detect(g, Objective.modularity(), seed=2)
    assert res.partition.n_communities == 1
    assert res.objective_value == pytest.approx(0.0, abs=1e-15)
    assert best_value(g, Objective.modularity()) == pytest.approx(0.0, abs=1e-15)


def test_ring_of_cliques():
    g = cliques(10, 5, ring=True)
    truth = Partition(g, np.repeat(np.arange(10), 5))
    obj = Objective.modularity()
    for seed in range(5):
        res = detect(g, obj, seed)
        assert res.objective_value >= value(obj, g, truth) - 1e-12
        assert res.partition.n_communities == 10


def test_fixed_point_reports_no_improvement():
    g = cliques(3, 4, ring=True)
    res = detect(g, Objective.modularity(), seed=0)
    again, improved = local_move_phase(g, Objective.modularity(), res.partition, make_rng(9))
    assert not improved
    assert np.array_equal(again.assignment, res.partition.assignment)


def test_deterministic_given_seed(karate_data):
    g = karate_data.graph
    for obj in (Objective.modularity(0.8), Objective.ppm(1.2), Objective.ilfr(0.3)):
        a = detect(g, obj, seed=123).partition.assignment
        b = detect(g, obj, seed=123).partition.assignment
        assert np.array_equal(a, b)
    runs = {tuple(detect(g, Objective.modularity(), s).partition.assignment) for s in range(20)}
    assert len(runs) > 1


def test_seed_sequence_and_generator_inputs(karate_data):
    g = karate_data.graph
    ss = np.random.SeedSequence(5, spawn_key=(1, 2))
    a = detect(g, Objective.modularity(), ss).partition.assignment
    b = detect(g, Objective.modularity(), np.random.SeedSequence(5, spawn_key=(1, 2))).partition.assignment
    assert np.array_equal(a, b)
    assert detect(g, Objective.modularity(), make_rng(3)).partition.n_communities >= 2


@settings(max_examples=60, deadline=None)
@given(graphs(2, 8), st.sampled_from(["modularity", "ppm", "ilfr"]), st.floats(0.05, 2.0), st.integers(0, 2**31))
def test_engine_result_properties(g, kind, param, seed):
    obj = Objective(kind, gamma=param) if kind != "ilfr" else Objective(kind, mu=min(param, 1.0))
    res = detect(g, obj, seed, check=True)
    assert res.objective_value == pytest.approx(value(obj, g, res.partition), abs=1e-9)
    assert res.objective_value <= best_value(g, obj) + 1e-9
    # the last level moved whole communities, so no merge of two of them can help
    p = res.partition
    for a, b in itertools.combinations(range(p.n_communities), 2):
        merged = np.where(p.assignment == b, a, p.assignment)
        assert value(obj, g, Partition(g, merged)) <= res.objective_value + 1e-9


def test_ilfr_mu_zero_merges_components():
    g = Graph.from_edges(7, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6)])
    res = detect(g, Objective.ilfr(0.0), seed=0)
    assert res.partition.n_communities == 2
    assert res.partition.m_out == 0


def test_higher_resolution_gives_more_communities(karate_data):
    g = karate_data.graph
    counts = [np.mean([detect(g, Objective.modularity(x), s).partition.n_communities for s in range(10)])
              for x in (0.3, 1.0, 3.0)]
    assert counts[0] < counts[1] < counts[2]


def test_rejects_edgeless_graph():
    g = Graph.from_edges(3, np.empty((0, 2), dtype=np.int64))
    with pytest.raises(ValueError):
        detect(g, Objective.modularity())


@pytest.mark.parametrize(
    "obj, reference",
    [
        # published means and standard deviations for the default parameters
        (Objective.ilfr(0.3), dict(rand=(0.754, 0.026), jaccard=(0.507, 0.040), nmi=(0.633, 0.062))),
        (Objective.ppm(1.0), dict(rand=(0.756, 0.024), jaccard=(0.509, 0.040), nmi=(0.629, 0.050))),
    ],
)
def test_default_karate_scores_within_three_sd(karate_data, obj, reference):
    parts = [detect(karate_data.graph, obj, s).partition for s in range(200)]
    for name, (mean, sd) in reference.items():
        f = get_metric(name)
        ours = np.mean([f(p, karate_data.truth) for p in parts])
        assert abs(ours - mean) <= 3 * sd, (name, ours)
