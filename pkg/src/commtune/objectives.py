"""Partition quality functions optimized by the Louvain engine.

Each objective is a sum of per-community terms plus a partition-independent
constant, so the effect of moving one vertex only touches two communities:

* modularity:  e_C/m - gamma * D_C^2 / (4 m^2)
* PPM:         e_C/m - gamma * (|C| choose 2) / (n choose 2)
* ILFR:        e_C * log(1 + (1 - mu) 2m / (mu D_C))

Here ``e_C`` is the intra-community edge weight (self-loops included),
``D_C`` the summed weighted degree and ``|C|`` the number of original
vertices. The ILFR term is the Poisson log-likelihood of the graph under
intensities ``mu d_i d_j / 2m + [same community] (1 - mu) d_i d_j / D_C``
with every term that does not depend on the partition dropped; the sum of
intensities over ordered pairs is the same for every partition, which is
what lets those terms go.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numba
import numpy as np

from .graph import Graph, Partition

MODULARITY, PPM, ILFR = 0, 1, 2
_KINDS = {"modularity": MODULARITY, "ppm": PPM, "ilfr": ILFR}

# objective family name -> (objective kind, parameter name, default value)
ALGORITHMS = {
    "louvain": ("modularity", "gamma", 1.0),
    "ppm": ("ppm", "gamma", 1.0),
    "ilfr": ("ilfr", "mu", 0.3),
}

GAIN_EPS = 1e-12


@dataclass(frozen=True)
class Objective:
    kind: str = "modularity"
    gamma: float = 1.0
    mu: float = 0.3

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown objective {self.kind!r}")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError("mu must lie in [0, 1]")

    @classmethod
    def modularity(cls, gamma: float = 1.0) -> "Objective":
        return cls("modularity", gamma=gamma)

    @classmethod
    def ppm(cls, gamma: float = 1.0) -> "Objective":
        return cls("ppm", gamma=gamma)

    @classmethod
    def ilfr(cls, mu: float = 0.3) -> "Objective":
        return cls("ilfr", mu=mu)

    @classmethod
    def for_algorithm(cls, algorithm: str, param: float | None = None) -> "Objective":
        """Objective used by ``algorithm`` ("louvain", "ppm" or "ilfr")."""
        try:
            kind, name, default = ALGORITHMS[algorithm]
        except KeyError:
            raise ValueError(f"unknown algorithm {algorithm!r}; choose from {sorted(ALGORITHMS)}") from None
        return cls(kind, **{name: default if param is None else float(param)})

    @property
    def code(self) -> int:
        return _KINDS[self.kind]

    @property
    def param(self) -> float:
        return self.mu if self.kind == "ilfr" else self.gamma

    def with_param(self, value: float) -> "Objective":
        if self.kind == "ilfr":
            return replace(self, mu=float(value))
        return replace(self, gamma=float(value))

    def __str__(self) -> str:
        name = "mu" if self.kind == "ilfr" else "gamma"
        return f"{self.kind}({name}={self.param:g})"


@numba.njit(cache=True)
def community_term(kind, e, deg, size, gamma, mu, two_m, npairs):
    """Per-community contribution; for ILFR with mu == 0 only the finite part."""
    if kind == MODULARITY:
        x = deg / two_m
        return 2.0 * e / two_m - gamma * x * x
    if kind == PPM:
        t = 2.0 * e / two_m
        if npairs > 0.0:
            t -= gamma * size * (size - 1.0) * 0.5 / npairs
        return t
    if e == 0.0 or deg <= 0.0:
        return 0.0
    if mu == 0.0:
        return -e * math.log(deg)
    return e * math.log1p((1.0 - mu) * two_m / (mu * deg))


def _constants(graph: Graph) -> tuple[float, float]:
    two_m = graph.total_weight_2m
    if two_m <= 0:
        raise ValueError("objective undefined for a graph without edges")
    n = graph.n_original
    return two_m, n * (n - 1.0) / 2.0


def value(obj: Objective, graph: Graph, partition: Partition) -> float:
    """Objective value of ``partition`` on ``graph``.

    ILFR is reported up to an additive constant; with ``mu == 0`` any
    inter-community edge makes the value ``-inf``.
    """
    two_m, npairs = _constants(graph)
    m = two_m / 2.0
    e = partition.community_intra
    D = partition.community_degree
    S = partition.community_size
    if obj.kind == "modularity":
        return partition.m_in / m - obj.gamma * float(np.sum(D * D)) / (two_m * two_m)
    if obj.kind == "ppm":
        pairs = float(np.sum(S * (S - 1.0))) / 2.0
        null = pairs / npairs if npairs > 0 else 0.0
        return partition.m_in / m - obj.gamma * null
    mu = obj.mu
    live = (e > 0) & (D > 0)
    if mu == 0.0:
        if partition.m_out > 1e-9:
            return -math.inf
        return float(-np.sum(e[live] * np.log(D[live])))
    base = math.log(mu / two_m)
    return partition.m_out * base + float(np.sum(e[live] * np.log(mu / two_m + (1.0 - mu) / D[live])))


def move_gain(obj: Objective, graph: Graph, partition: Partition, v: int, target: int) -> float:
    """Change in ``value`` if vertex ``v`` moves into community ``target``.

    ``target`` may equal the current number of community slots to denote a
    fresh empty community. For ILFR with ``mu == 0`` a move that changes the
    intra-community weight returns +/-inf.
    """
    source = int(partition.assignment[v])
    if target == source:
        return 0.0
    two_m, npairs = _constants(graph)
    links = partition.weight_to_communities(v)
    k_src, k_dst = links.get(source, 0.0), links.get(target, 0.0)
    if obj.kind == "ilfr" and obj.mu == 0.0 and k_dst != k_src:
        return math.inf if k_dst > k_src else -math.inf
    loop = graph.self_loops[v]
    d, s = graph.degrees[v], graph.vertex_size[v]
    e, D, S = partition.community_intra, partition.community_degree, partition.community_size
    if target < len(D):
        et, Dt, St = e[target], D[target], S[target]
    else:
        et = Dt = St = 0.0
    code, g, mu = obj.code, obj.gamma, obj.mu
    before = community_term(code, e[source], D[source], S[source], g, mu, two_m, npairs) + community_term(
        code, et, Dt, St, g, mu, two_m, npairs
    )
    after = community_term(code, e[source] - k_src - loop, D[source] - d, S[source] - s, g, mu, two_m, npairs) + (
        community_term(code, et + k_dst + loop, Dt + d, St + s, g, mu, two_m, npairs)
    )
    return after - before
