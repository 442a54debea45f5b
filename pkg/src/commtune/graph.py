"""Undirected graphs, partitions, edge-list I/O and supervertex aggregation."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np


class GraphFormatError(ValueError):
    """Malformed edge-list or label file."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable weighted undirected graph in CSR form.

    ``vertex_size`` counts how many original vertices a supervertex stands
    for; it is all ones for graphs that were not produced by ``aggregate``.
    ``self_loops[v]`` is the weight of the loop at ``v`` counted once as an
    edge, so it contributes twice to the degree of ``v``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    self_loops: np.ndarray
    vertex_size: np.ndarray
    labels: tuple = field(default=())
    degrees: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        src = np.repeat(np.arange(self.n), np.diff(self.indptr))
        deg = np.bincount(src, weights=self.weights, minlength=self.n) + 2.0 * self.self_loops
        object.__setattr__(self, "degrees", _frozen(deg.astype(np.float64)))
        for name in ("indptr", "indices", "weights", "self_loops", "vertex_size"):
            _frozen(getattr(self, name))

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]] | np.ndarray,
        weights: Sequence[float] | np.ndarray | None = None,
        self_loops: np.ndarray | None = None,
        vertex_size: np.ndarray | None = None,
        labels: Sequence | None = None,
    ) -> "Graph":
        """Build a graph from an undirected edge list (each edge listed once)."""
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64).reshape(-1, 2)
        w = np.ones(len(e)) if weights is None else np.asarray(weights, dtype=np.float64)
        if np.any(e < 0) or np.any(e >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise ValueError("self-loops must be passed through self_loops")
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        ww = np.concatenate([w, w])
        order = np.lexsort((dst, src))
        src, dst, ww = src[order], dst[order], ww[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(
            indptr=indptr,
            indices=dst.astype(np.int64),
            weights=ww.astype(np.float64),
            self_loops=np.zeros(n) if self_loops is None else np.asarray(self_loops, dtype=np.float64).copy(),
            vertex_size=np.ones(n) if vertex_size is None else np.asarray(vertex_size, dtype=np.float64).copy(),
            labels=tuple(labels) if labels is not None else tuple(range(n)),
        )

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def total_weight_2m(self) -> float:
        return float(self.degrees.sum())

    @property
    def m(self) -> float:
        """Total edge weight (self-loops included)."""
        return self.total_weight_2m / 2.0

    @property
    def n_original(self) -> float:
        return float(self.vertex_size.sum())

    def neighbors(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def edges(self) -> np.ndarray:
        """Edge array of shape (m, 2) with ``u < v``, self-loops excluded."""
        src = np.repeat(np.arange(self.n), np.diff(self.indptr))
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def edge_weights(self) -> np.ndarray:
        src = np.repeat(np.arange(self.n), np.diff(self.indptr))
        return self.weights[src < self.indices]

    def degree_sequence(self) -> np.ndarray:
        """Integer degrees; only meaningful for unweighted graphs."""
        return np.rint(self.degrees).astype(np.int64)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        for (u, v), w in zip(self.edges(), self.edge_weights()):
            g.add_edge(int(u), int(v), weight=float(w))
        for v in np.flatnonzero(self.self_loops):
            g.add_edge(int(v), int(v), weight=float(self.self_loops[v]))
        return g

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m:g})"


class Partition:
    """Assignment of vertices to communities with incrementally kept tallies.

    Per-community arrays are indexed by community id and may contain empty
    slots after ``move``; ``compact`` renumbers ids densely.
    """

    def __init__(self, graph: Graph, assignment: Sequence[int] | np.ndarray):
        a = np.asarray(assignment, dtype=np.int64)
        if a.shape != (graph.n,):
            raise ValueError(f"assignment has length {a.size}, graph has {graph.n} vertices")
        if graph.n and a.min() < 0:
            raise ValueError("community ids must be non-negative")
        _, dense = np.unique(a, return_inverse=True)
        self.graph = graph
        self.assignment = dense.astype(np.int64).reshape(-1)
        self._recount()

    def _recount(self) -> None:
        g, a = self.graph, self.assignment
        k = int(a.max()) + 1 if a.size else 0
        self.community_degree = np.bincount(a, weights=g.degrees, minlength=k).astype(np.float64)
        self.community_size = np.bincount(a, weights=g.vertex_size, minlength=k).astype(np.float64)
        self.community_members = np.bincount(a, minlength=k).astype(np.int64)
        src = np.repeat(np.arange(g.n), np.diff(g.indptr))
        same = a[src] == a[g.indices]
        # every non-loop edge appears twice in CSR
        intra = np.bincount(a[src[same]], weights=g.weights[same], minlength=k) / 2.0
        self.community_intra = intra + np.bincount(a, weights=g.self_loops, minlength=k)
        self.m_in = float(self.community_intra.sum())
        self.m_out = g.m - self.m_in

    @classmethod
    def singletons(cls, graph: Graph) -> "Partition":
        return cls(graph, np.arange(graph.n))

    @classmethod
    def all_in_one(cls, graph: Graph) -> "Partition":
        return cls(graph, np.zeros(graph.n, dtype=np.int64))

    @property
    def n_communities(self) -> int:
        return int(np.count_nonzero(self.community_members))

    @property
    def k(self) -> int:
        return self.n_communities

    def weight_to_communities(self, v: int) -> dict[int, float]:
        """Edge weight from ``v`` to each adjacent community (loops excluded)."""
        out: dict[int, float] = {}
        nbrs, ws = self.graph.neighbors(v)
        for u, w in zip(nbrs.tolist(), ws.tolist()):
            c = int(self.assignment[u])
            out[c] = out.get(c, 0.0) + w
        return out

    def move(self, v: int, target: int) -> None:
        """Move ``v`` into community ``target``; ``target == capacity`` opens a new slot."""
        source = int(self.assignment[v])
        if target == source:
            return
        if target == len(self.community_degree):
            for name in ("community_degree", "community_size", "community_intra"):
                setattr(self, name, np.append(getattr(self, name), 0.0))
            self.community_members = np.append(self.community_members, 0)
        g = self.graph
        links = self.weight_to_communities(v)
        loop = g.self_loops[v]
        k_src, k_dst = links.get(source, 0.0), links.get(target, 0.0)
        self.community_intra[source] -= k_src + loop
        self.community_intra[target] += k_dst + loop
        self.community_degree[source] -= g.degrees[v]
        self.community_degree[target] += g.degrees[v]
        self.community_size[source] -= g.vertex_size[v]
        self.community_size[target] += g.vertex_size[v]
        self.community_members[source] -= 1
        self.community_members[target] += 1
        self.m_in += k_dst - k_src
        self.m_out -= k_dst - k_src
        self.assignment[v] = target

    def compact(self) -> "Partition":
        return Partition(self.graph, self.assignment)

    def copy(self) -> "Partition":
        return Partition(self.graph, self.assignment.copy())

    def communities(self) -> list[np.ndarray]:
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.cumsum(np.bincount(self.assignment))[:-1]
        return [c for c in np.split(order, bounds) if c.size]

    def labels(self) -> dict:
        """Original vertex label -> community id."""
        return {lab: int(c) for lab, c in zip(self.graph.labels, self.assignment)}

    def __len__(self) -> int:
        return self.graph.n

    def __repr__(self) -> str:
        return f"Partition(n={self.graph.n}, k={self.n_communities}, m_in={self.m_in:g}, m_out={self.m_out:g})"


def _open_text(source) -> tuple[IO[str], str | None, bool]:
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="utf-8"), os.fspath(source), True
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8")), None, True
    if isinstance(source, io.TextIOBase):
        return source, getattr(source, "name", None), False
    # binary file-like
    return io.TextIOWrapper(source, encoding="utf-8"), getattr(source, "name", None), False


def _records(source):
    fh, name, owned = _open_text(source)
    try:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphFormatError(f"expected 2 tokens, got {len(parts)}", lineno, name)
            yield lineno, name, parts
    finally:
        if owned:
            fh.close()


def _vertex_token(tok: str, lineno: int, name: str | None) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"non-integer vertex id {tok!r}", lineno, name) from None


def load_edge_list(source) -> Graph:
    """Read a simple undirected graph from a whitespace-separated edge list.

    ``source`` may be a path, raw bytes, or a text/binary file object.
    Vertex ids are integers; they are remapped to ``0..n-1`` in increasing
    order and the originals are kept in ``Graph.labels``.
    """
    raw: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, name, (a, b) in _records(source):
        u, v = _vertex_token(a, lineno, name), _vertex_token(b, lineno, name)
        if u == v:
            raise GraphFormatError(f"self-loop on vertex {u}", lineno, name)
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key[0]} {key[1]}", lineno, name)
        seen.add(key)
        raw.append(key)
    ids = sorted({x for e in raw for x in e})
    index = {x: i for i, x in enumerate(ids)}
    edges = np.array([(index[u], index[v]) for u, v in raw], dtype=np.int64).reshape(-1, 2)
    return Graph.from_edges(len(ids), edges, labels=ids)


def load_labels(source, graph: Graph) -> Partition:
    """Read ``vertex community`` lines into a partition of ``graph``."""
    index = {lab: i for i, lab in enumerate(graph.labels)}
    assignment = np.full(graph.n, -1, dtype=np.int64)
    communities: dict[str, int] = {}
    for lineno, name, (a, c) in _records(source):
        v = _vertex_token(a, lineno, name)
        if v not in index:
            raise GraphFormatError(f"unknown vertex {v}", lineno, name)
        i = index[v]
        if assignment[i] >= 0:
            raise GraphFormatError(f"duplicate vertex {v}", lineno, name)
        assignment[i] = communities.setdefault(c, len(communities))
    missing = np.flatnonzero(assignment < 0)
    if missing.size:
        raise GraphFormatError(f"missing vertex {graph.labels[missing[0]]} ({missing.size} unlabeled)")
    return Partition(graph, assignment)


def write_edge_list(graph: Graph, fh: IO[str]) -> None:
    for u, v in graph.edges():
        fh.write(f"{graph.labels[u]} {graph.labels[v]}\n")


def write_labels(partition: Partition, fh: IO[str]) -> None:
    for lab, c in zip(partition.graph.labels, partition.assignment):
        fh.write(f"{lab} {int(c)}\n")


def aggregate(graph: Graph, partition: Partition) -> Graph:
    """Contract each community into one weighted supervertex.

    Supervertex ``c`` corresponds to community id ``c`` of the compacted
    partition. Edge weights between supervertices are the total weight
    between the two communities; intra-community weight becomes a self-loop.
    """
    a = partition.compact().assignment
    k = int(a.max()) + 1 if a.size else 0
    src = np.repeat(np.arange(graph.n), np.diff(graph.indptr))
    cu, cv, w = a[src], a[graph.indices], graph.weights
    loops = np.bincount(a, weights=graph.self_loops, minlength=k)
    same = cu == cv
    loops += np.bincount(cu[same], weights=w[same], minlength=k) / 2.0
    keep = cu < cv
    key = cu[keep] * k + cv[keep]
    uniq, inv = np.unique(key, return_inverse=True)
    ew = np.bincount(inv.reshape(-1), weights=w[keep], minlength=len(uniq))
    edges = np.column_stack([uniq // k, uniq % k])
    sizes = np.bincount(a, weights=graph.vertex_size, minlength=k)
    return Graph.from_edges(k, edges, ew, self_loops=loops, vertex_size=sizes)


def mixing_fraction(graph: Graph, partition: Partition) -> float:
    """Fraction of edge weight running between different communities."""
    if graph.m == 0:
        raise ValueError("mixing fraction undefined for a graph without edges")
    return partition.m_out / graph.m
