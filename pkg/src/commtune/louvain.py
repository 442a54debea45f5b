"""Multi-level greedy local-move optimization (Louvain) for any ``Objective``."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numba
import numpy as np

from .graph import Graph, Partition, aggregate
from .objectives import GAIN_EPS, ILFR, Objective, community_term, value

log = logging.getLogger(__name__)

MAX_SWEEPS = 10_000


@numba.njit(cache=True)
def _sweep(indptr, indices, weights, loops, deg, vsize, order, comm, c_e, c_D, c_S,
           kind, gamma, mu, two_m, npairs, scratch, touched):
    # scratch[c] < 0 marks community c as not yet seen for the current vertex
    lexicographic = kind == ILFR and mu == 0.0
    moves = 0
    for v in order:
        cur = comm[v]
        nt = 0
        for j in range(indptr[v], indptr[v + 1]):
            c = comm[indices[j]]
            if scratch[c] < 0.0:
                scratch[c] = 0.0
                touched[nt] = c
                nt += 1
            scratch[c] += weights[j]
        k_cur = scratch[cur] if scratch[cur] >= 0.0 else 0.0
        lv, dv, sv = loops[v], deg[v], vsize[v]
        removal = (community_term(kind, c_e[cur] - k_cur - lv, c_D[cur] - dv, c_S[cur] - sv, gamma, mu, two_m, npairs)
                   - community_term(kind, c_e[cur], c_D[cur], c_S[cur], gamma, mu, two_m, npairs))
        best = cur
        best_gain = 0.0
        best_primary = 0.0
        for t in range(nt):
            c = touched[t]
            if c == cur:
                continue
            k = scratch[c]
            gain = removal + (community_term(kind, c_e[c] + k + lv, c_D[c] + dv, c_S[c] + sv, gamma, mu, two_m, npairs)
                              - community_term(kind, c_e[c], c_D[c], c_S[c], gamma, mu, two_m, npairs))
            primary = k - k_cur if lexicographic else 0.0
            if best == cur:
                better = primary > 0.0 or (primary == 0.0 and gain > GAIN_EPS)
            else:
                better = (primary > best_primary
                          or (primary == best_primary and (gain > best_gain or (gain == best_gain and c < best))))
            if better:
                best, best_gain, best_primary = c, gain, primary
        if best != cur:
            k_best = scratch[best]
            c_e[cur] -= k_cur + lv
            c_D[cur] -= dv
            c_S[cur] -= sv
            c_e[best] += k_best + lv
            c_D[best] += dv
            c_S[best] += sv
            comm[v] = best
            moves += 1
        for t in range(nt):
            scratch[touched[t]] = -1.0
    return moves


def make_rng(seed) -> np.random.Generator:
    """Counter-based generator; ``seed`` may be an int, a SeedSequence or a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def local_move_phase(graph: Graph, obj: Objective, partition: Partition, rng) -> tuple[Partition, bool]:
    """Sweep vertices in random order, moving each to its best neighboring community.

    Sweeps repeat (with a fresh order each time) until one makes no move.
    Returns the compacted partition and whether anything moved.
    """
    rng = make_rng(rng)
    n = graph.n
    two_m = graph.total_weight_2m
    if two_m <= 0:
        raise ValueError("cannot optimize on a graph without edges")
    npairs = graph.n_original * (graph.n_original - 1.0) / 2.0
    start = partition.compact()
    comm = start.assignment.copy()
    cap = max(n, len(start.community_degree))
    c_e = np.zeros(cap)
    c_D = np.zeros(cap)
    c_S = np.zeros(cap)
    k = len(start.community_degree)
    c_e[:k], c_D[:k], c_S[:k] = start.community_intra, start.community_degree, start.community_size
    scratch = np.full(cap, -1.0)
    touched = np.empty(cap, dtype=np.int64)
    improved = False
    for _ in range(MAX_SWEEPS):
        order = rng.permutation(n)
        moves = _sweep(graph.indptr, graph.indices, graph.weights, graph.self_loops, graph.degrees,
                       graph.vertex_size, order, comm, c_e, c_D, c_S, obj.code, float(obj.gamma),
                       float(obj.mu), two_m, npairs, scratch, touched)
        if moves == 0:
            break
        improved = True
    else:
        log.warning("local move phase hit the sweep limit (%d)", MAX_SWEEPS)
    if not improved:
        return start, False
    return Partition(graph, comm), True


@dataclass
class DetectionResult:
    partition: Partition
    objective_value: float
    levels: int
    seed: object


def detect(graph: Graph, obj: Objective, seed=None, check: bool = False) -> DetectionResult:
    """Run Louvain from singletons until a local-move phase changes nothing.

    With ``check=True`` the objective is recomputed after every level and
    must never decrease.
    """
    if graph.m <= 0:
        raise ValueError("cannot detect communities in a graph without edges")
    rng = make_rng(seed)
    level_graph = graph
    membership = np.arange(graph.n)
    part = Partition.singletons(graph)
    levels = 0
    last = value(obj, graph, part) if check else None
    while True:
        part, improved = local_move_phase(level_graph, obj, part, rng)
        if not improved:
            break
        membership = part.assignment[membership]
        if check:
            now = value(obj, graph, Partition(graph, membership))
            if not (now >= last - 1e-9 or last == -np.inf):
                raise AssertionError(f"objective decreased from {last} to {now} at level {levels}")
            last = now
        level_graph = aggregate(level_graph, part)
        part = Partition.singletons(level_graph)
        levels += 1
    final = Partition(graph, membership)
    return DetectionResult(final, value(obj, graph, final), levels, seed)
