"""LFR benchmark graphs with planted communities.

Generation runs in four stages: sample a power-law degree sequence,
sample power-law community sizes, place vertices into communities so that
each vertex's internal degree fits, then wire internal and external stubs
with the configuration model and remove self-loops, multi-edges and
misplaced external edges by degree-preserving double-edge swaps.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .graph import Graph, Partition
from .louvain import make_rng
from .powerlaw import LfrParams

log = logging.getLogger(__name__)

REWIRE_SWEEPS = 50
MAX_ATTEMPTS = 10
SIZE_DRAWS = 50


class LfrGenerationError(RuntimeError):
    """A generation stage failed; ``params`` holds the parameters it ran with."""

    def __init__(self, message: str, params: LfrParams | None = None):
        super().__init__(message)
        self.params = params


class InfeasibleParametersError(LfrGenerationError):
    pass


class UnrealizableSplitError(LfrGenerationError):
    """The internal/external degree split has no simple realization for this assignment."""


@dataclass
class LfrInstance:
    graph: Graph
    ground_truth: Partition
    achieved_mixing: float
    params: LfrParams
    seed: object
    degrees: np.ndarray | None = None  # the sampled sequence the graph realizes


def default_mixing_tolerance(n: int) -> float:
    return 0.02 if n >= 1000 else 0.05


def _powerlaw_weights(lo: int, hi: int, exponent: float) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(lo, hi + 1, dtype=np.float64)
    return k, k ** (-exponent)


def _sample_discrete(support: np.ndarray, weights: np.ndarray, size: int, rng) -> np.ndarray:
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, rng.random(size), side="right")
    return support[np.minimum(idx, len(support) - 1)].astype(np.int64)


def _degree_law(x_min: float, d_max: int, exponent: float) -> tuple[np.ndarray, np.ndarray]:
    # the lowest support point carries a fractional weight so the mean is continuous in x_min
    k0 = int(math.floor(x_min))
    k, w = _powerlaw_weights(k0, d_max, exponent)
    w[0] *= 1.0 - (x_min - k0)
    return k, w


def _law_mean(x_min: float, d_max: int, exponent: float) -> float:
    k, w = _degree_law(x_min, d_max, exponent)
    return float(np.dot(k, w) / w.sum())


def solve_min_degree(mean_degree: float, d_max: int, exponent: float) -> float:
    """Lower cutoff of the degree law whose mean equals ``mean_degree``."""
    lo, hi = 1.0, float(d_max)
    if mean_degree > d_max or mean_degree < _law_mean(lo, d_max, exponent) - 1e-12:
        raise InfeasibleParametersError(
            f"infeasible degree parameters: no minimum degree in [1, {d_max}] gives mean {mean_degree}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _law_mean(mid, d_max, exponent) < mean_degree:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sample_degrees(params: LfrParams, rng) -> np.ndarray:
    """Draw ``n`` degrees from the truncated power law with the requested mean.

    The sum is made even by raising one randomly chosen degree below ``d_max``.
    """
    rng = make_rng(rng)
    x_min = solve_min_degree(params.mean_degree, params.d_max, params.degree_exponent)
    k, w = _degree_law(x_min, params.d_max, params.degree_exponent)
    deg = _sample_discrete(k, w, params.n, rng)
    if deg.sum() % 2:
        room = np.flatnonzero(deg < params.d_max)
        if room.size:
            deg[rng.choice(room)] += 1
        else:
            deg[rng.integers(params.n)] -= 1
    return deg


def sample_community_sizes(params: LfrParams, n: int, rng) -> np.ndarray:
    """Power-law community sizes in ``[c_min, c_max]`` summing to exactly ``n``."""
    rng = make_rng(rng)
    if params.c_min > n:
        raise InfeasibleParametersError(f"c_min={params.c_min} exceeds n={n}", params)
    c_max = min(params.c_max, n)
    if -(-n // c_max) * params.c_min > n:
        raise InfeasibleParametersError(f"no community sizes in [{params.c_min}, {c_max}] sum to n={n}", params)
    k, w = _powerlaw_weights(params.c_min, c_max, params.size_exponent)
    sizes: list[int] = []
    total = 0
    while total < n:
        batch = _sample_discrete(k, w, max(8, 2 * (n - total) // params.c_min + 1), rng)
        for s in batch.tolist():
            sizes.append(s)
            total += s
            if total >= n:
                break
    excess = total - n
    sizes[-1] -= excess
    out = np.array(sizes, dtype=np.int64)
    if out[-1] >= params.c_min or out.size == 1:
        return out
    rest, out = int(out[-1]), out[:-1]
    if (c_max - out).sum() >= rest:
        # spread the short remainder over communities that still have room
        for _ in range(rest):
            out[rng.choice(np.flatnonzero(out < c_max))] += 1
        return out
    # otherwise grow the remainder to c_min by shrinking the others
    for _ in range(params.c_min - rest):
        out[rng.choice(np.flatnonzero(out > params.c_min))] -= 1
    return np.append(out, params.c_min)


def internal_degrees(degrees: np.ndarray, mixing: float) -> np.ndarray:
    """Split each degree into an internal part close to ``(1 - mixing) * d``.

    Values are rounded to nearest (ties to even); a few are then moved to the
    other side of their rounding interval so that the totals match
    ``round((1 - mixing) * sum(d))``.
    """
    d = np.asarray(degrees, dtype=np.int64)
    exact = (1.0 - mixing) * d
    k = np.rint(exact).astype(np.int64)
    gap = int(np.rint((1.0 - mixing) * d.sum())) - int(k.sum())
    if gap > 0:
        cand = np.flatnonzero(k < exact)
        cand = cand[np.argsort(-(exact[cand] - k[cand]), kind="stable")][:gap]
        k[cand] += 1
    elif gap < 0:
        cand = np.flatnonzero(k > exact)
        cand = cand[np.argsort(-(k[cand] - exact[cand]), kind="stable")][:-gap]
        k[cand] -= 1
    return k


def assign_vertices(degrees: np.ndarray, sizes: np.ndarray, mixing: float, rng, max_rounds: int = 50) -> np.ndarray:
    """Place vertices into communities so each internal degree is below the community size.

    Homeless vertices pick a community (probability proportional to size,
    among those large enough); a full community evicts a random member,
    which becomes homeless in turn.
    """
    rng = make_rng(rng)
    sizes = np.asarray(sizes, dtype=np.int64)
    k_in = internal_degrees(degrees, mixing)
    n = len(k_in)
    if sizes.sum() != n:
        raise ValueError(f"community sizes sum to {sizes.sum()}, expected {n}")
    biggest = int(sizes.max())
    if k_in.max(initial=0) >= biggest:
        raise InfeasibleParametersError(
            f"assignment infeasible; consider larger c_max (internal degree {int(k_in.max())} "
            f"needs a community larger than {biggest})"
        )
    by_size = np.argsort(sizes, kind="stable")
    sorted_sizes = sizes[by_size]
    cum = np.cumsum(sorted_sizes)
    members: list[list[int]] = [[] for _ in sizes]
    assignment = np.full(n, -1, dtype=np.int64)
    homeless = rng.permutation(n).tolist()
    budget = max_rounds * n + 1000
    steps = 0
    while homeless:
        steps += 1
        if steps > budget:
            raise LfrGenerationError("assignment infeasible; consider larger c_max (retry budget exhausted)")
        v = homeless.pop()
        first = int(np.searchsorted(sorted_sizes, k_in[v], side="right"))
        base = cum[first - 1] if first > 0 else 0
        pick = base + rng.random() * (cum[-1] - base)
        c = int(by_size[min(int(np.searchsorted(cum, pick, side="right")), len(cum) - 1)])
        group = members[c]
        if len(group) >= sizes[c]:
            j = int(rng.integers(len(group)))
            out = group[j]
            group[j] = v
            assignment[out] = -1
            homeless.append(out)
        else:
            group.append(v)
        assignment[v] = c
    return assignment


def _pair_stubs(vertices: np.ndarray, counts: np.ndarray, rng) -> list[list[int]]:
    stubs = np.repeat(vertices, counts)
    rng.shuffle(stubs)
    return stubs.reshape(-1, 2).tolist()


def _balance_parity(k_in: np.ndarray, ext: np.ndarray, assignment: np.ndarray, sizes: np.ndarray,
                    target_internal: int, rng) -> None:
    # each community needs an even internal stub count; fix by shifting one stub
    k = len(sizes)
    sums = np.bincount(assignment, weights=k_in, minlength=k).astype(np.int64)
    for c in np.flatnonzero(sums % 2):
        idx = np.flatnonzero(assignment == c)
        surplus = int(k_in.sum()) - target_internal
        up = idx[(ext[idx] > 0) & (k_in[idx] + 1 < sizes[c])]
        down = idx[k_in[idx] > 0]
        if surplus < 0 and up.size or not down.size:
            if not up.size:
                raise LfrGenerationError(f"cannot make internal degree of community {c} even")
            v = rng.choice(up)
            k_in[v] += 1
            ext[v] -= 1
        else:
            v = rng.choice(down)
            k_in[v] -= 1
            ext[v] += 1


def is_graphical(degrees) -> bool:
    """Erdos-Gallai test for a simple undirected graph."""
    d = np.sort(np.asarray(degrees, dtype=np.int64))[::-1]
    if d.size == 0:
        return True
    if d[-1] < 0 or d.sum() % 2:
        return False
    k = np.arange(1, d.size + 1)
    lhs = np.cumsum(d)
    # rhs[k-1] = sum over i > k of min(d_i, k)
    rhs = np.empty(d.size, dtype=np.int64)
    for i in range(d.size):
        rhs[i] = np.minimum(d[i + 1:], k[i]).sum()
    return bool(np.all(lhs <= k * (k - 1) + rhs))


def _havel_hakimi(vertices: np.ndarray, degrees: np.ndarray, group=None) -> list[list[int]]:
    # deterministic simple realization; the caller randomizes it with swaps.
    # With ``group`` set, only vertices in different groups may be joined
    # (greedy, so it can fail on sequences that are realizable).
    left = {int(v): int(d) for v, d in zip(vertices, degrees) if d > 0}
    edges = []
    while left:
        v = max(left, key=lambda x: (left[x], -x))
        d = left.pop(v)
        pool = left if group is None else [x for x in left if group[x] != group[v]]
        targets = sorted(pool, key=lambda x: (-left[x], x))[:d]
        if len(targets) < d:
            if group is None:
                raise UnrealizableSplitError("degree sequence is not graphical")
            raise LfrGenerationError("external stubs cannot be paired across communities")
        for t in targets:
            edges.append([v, t])
            left[t] -= 1
            if left[t] == 0:
                del left[t]
    return edges


def _shuffle_simple(edges: list[list[int]], counts: Counter, n: int, rng, rounds: int, allowed=None) -> None:
    # random double-edge swaps that keep the graph simple (and every edge allowed)
    if len(edges) < 2:
        return
    for _ in range(rounds * len(edges)):
        i = int(rng.integers(len(edges)))
        u, v = edges[i]
        j, x, y = _partner(edges, i, rng)
        if u == y or x == v:
            continue
        if allowed is not None and not (allowed(u, y) and allowed(x, v)):
            continue
        k1, k2 = _key(u, y, n), _key(x, v, n)
        if k1 == k2 or counts[k1] > 0 or counts[k2] > 0:
            continue
        _swap(edges, counts, n, i, j, u, v, x, y)


def _remember(edges, counts: Counter, n: int) -> None:
    for u, v in edges:
        counts[_key(u, v, n)] += 1


def _forget(edges, counts: Counter, n: int) -> None:
    for u, v in edges:
        kk = _key(u, v, n)
        counts[kk] -= 1
        if counts[kk] == 0:
            del counts[kk]


def _key(u: int, v: int, n: int) -> int:
    return u * n + v if u < v else v * n + u


def _partner(edges, i, rng):
    m = len(edges)
    j = int(rng.integers(m - 1))
    j += j >= i
    x, y = edges[j]
    if rng.random() < 0.5:
        x, y = y, x
    return j, x, y


def _swap(edges, counts, n, i, j, u, v, x, y) -> None:
    # (u, v), (x, y) -> (u, y), (x, v)
    for kk in (_key(u, v, n), _key(x, y, n)):
        counts[kk] -= 1
        if counts[kk] == 0:
            del counts[kk]
    counts[_key(u, y, n)] += 1
    counts[_key(x, v, n)] += 1
    edges[i] = [u, y]
    edges[j] = [x, v]


def _rewire(edges: list[list[int]], counts: Counter, n: int, is_bad, allowed, rng, sweeps: int, tries: int) -> None:
    if len(edges) < 2:
        if any(is_bad(u, v) for u, v in edges):
            raise LfrGenerationError("cannot rewire a single bad edge")
        return
    for _ in range(sweeps):
        bad = [i for i, (u, v) in enumerate(edges) if is_bad(u, v)]
        if not bad:
            return
        for i in bad:
            u, v = edges[i]
            if not is_bad(u, v):
                continue
            fixed = False
            for _ in range(tries):
                j, x, y = _partner(edges, i, rng)
                if u == y or x == v:
                    continue
                k1, k2 = _key(u, y, n), _key(x, v, n)
                if k1 == k2 or counts[k1] > 0 or counts[k2] > 0:
                    continue
                if is_bad(u, y) or is_bad(x, v):
                    continue
                _swap(edges, counts, n, i, j, u, v, x, y)
                fixed = True
                break
            if not fixed:
                # no clean swap found: move the defect elsewhere so the next sweep sees a new configuration
                for _ in range(tries):
                    j, x, y = _partner(edges, i, rng)
                    if u == y or x == v or not (allowed(u, y) and allowed(x, v)):
                        continue
                    _swap(edges, counts, n, i, j, u, v, x, y)
                    break
    if any(is_bad(u, v) for u, v in edges):
        raise LfrGenerationError(f"rewiring did not converge after {sweeps} sweeps")


def build_edges(degrees: np.ndarray, assignment: np.ndarray, mixing: float, rng,
                sweeps: int = REWIRE_SWEEPS, tries: int = 100) -> Graph:
    """Wire a simple graph with exactly ``degrees`` around the planted ``assignment``.

    Internal stubs are paired inside each community and external stubs
    across the whole graph, then bad edges are swapped away.
    """
    rng = make_rng(rng)
    deg = np.asarray(degrees, dtype=np.int64)
    assignment = np.asarray(assignment, dtype=np.int64)
    n = len(deg)
    sizes = np.bincount(assignment)
    k_in = internal_degrees(deg, mixing)
    ext = deg - k_in
    if np.any(k_in >= sizes[assignment]):
        raise InfeasibleParametersError("internal degree not below community size")
    _balance_parity(k_in, ext, assignment, sizes, int(np.rint((1.0 - mixing) * deg.sum())), rng)

    counts: Counter = Counter()
    all_edges: list[list[int]] = []
    order = np.argsort(assignment, kind="stable")
    bounds = np.cumsum(sizes)[:-1]
    ext_per = np.bincount(assignment, weights=ext, minlength=len(sizes))
    if ext_per.size and 2 * ext_per.max() > ext_per.sum():
        raise UnrealizableSplitError("one community holds more than half of all external stubs")
    groups = np.split(order, bounds)
    for c, members in enumerate(groups):
        if not is_graphical(k_in[members]):
            raise UnrealizableSplitError(f"internal degrees of community {c} are not graphical")
    for members in groups:
        group = _pair_stubs(members, k_in[members], rng)
        for u, v in group:
            counts[_key(u, v, n)] += 1

        def internal_bad(u, v):
            return u == v or counts[_key(u, v, n)] > 1

        try:
            _rewire(group, counts, n, internal_bad, lambda u, v: True, rng, sweeps, tries)
        except LfrGenerationError:
            # dense small groups: start from a simple realization and randomize it
            _forget(group, counts, n)
            group = _havel_hakimi(members, k_in[members])
            _remember(group, counts, n)
            _shuffle_simple(group, counts, n, rng, 10)
        all_edges.extend(group)

    if ext.sum():
        outer = _pair_stubs(np.arange(n), ext, rng)
        for u, v in outer:
            counts[_key(u, v, n)] += 1

        def external_bad(u, v):
            return u == v or assignment[u] == assignment[v] or counts[_key(u, v, n)] > 1

        def across(u, v):
            return assignment[u] != assignment[v]

        try:
            _rewire(outer, counts, n, external_bad, across, rng, sweeps, tries)
        except LfrGenerationError:
            _forget(outer, counts, n)
            outer = _havel_hakimi(np.arange(n), ext, assignment)
            _remember(outer, counts, n)
            _shuffle_simple(outer, counts, n, rng, 10, across)
        all_edges.extend(outer)

    return Graph.from_edges(n, np.array(all_edges, dtype=np.int64).reshape(-1, 2))


def generate_lfr(params: LfrParams, seed=None, mixing_tolerance: float | None = None,
                 max_attempts: int = MAX_ATTEMPTS) -> LfrInstance:
    """Generate an LFR graph; restarts from fresh degrees when a stage fails.

    Within one attempt, community sizes are redrawn (up to ``SIZE_DRAWS``
    times) when none is large enough for the biggest internal degree, and the
    vertex assignment is redrawn when it leaves some community with internal
    degrees no simple graph can realize. A degree sequence whose largest
    internal degree cannot fit below ``c_max`` fails the attempt.
    """
    rng = make_rng(seed)
    tol = default_mixing_tolerance(params.n) if mixing_tolerance is None else mixing_tolerance
    last: Exception | None = None
    for attempt in range(max_attempts):
        try:
            deg = sample_degrees(params, rng)
            need = int(internal_degrees(deg, params.mixing).max()) + 1
            if need > min(params.c_max, params.n):
                # a hub whose internal degree fits no community: redraw degrees
                raise InfeasibleParametersError(
                    f"assignment infeasible; consider larger c_max (internal degree {need - 1} "
                    f"needs a community larger than {params.c_max})"
                )
            # redraw sizes until some community can hold the largest internal degree
            for _ in range(SIZE_DRAWS):
                sizes = sample_community_sizes(params, params.n, rng)
                if sizes.max() >= need:
                    break
            # small dense communities can get internal degrees no simple graph realizes
            for draw in range(SIZE_DRAWS):
                assignment = assign_vertices(deg, sizes, params.mixing, rng)
                try:
                    graph = build_edges(deg, assignment, params.mixing, rng)
                    break
                except UnrealizableSplitError:
                    if draw == SIZE_DRAWS - 1:
                        raise
            truth = Partition(graph, assignment)
            achieved = truth.m_out / graph.m
            if abs(achieved - params.mixing) > tol:
                raise LfrGenerationError(f"achieved mixing {achieved:.4f} misses target {params.mixing:.4f} by more than {tol}")
            return LfrInstance(graph, truth, achieved, params, seed, deg)
        except LfrGenerationError as exc:
            exc.params = params
            last = exc
            log.debug("LFR attempt %d failed: %s", attempt + 1, exc)
    assert last is not None
    raise last
