"""Similarity between two partitions of the same vertex set.

All functions accept either ``Partition`` objects or plain label sequences.
Rand and Jaccard are computed from a contingency table in integer
arithmetic, never by enumerating vertex pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Partition


@dataclass(frozen=True)
class PairCounts:
    """Vertex-pair tallies: ``n11`` together in both, ``n10`` only in the first, and so on."""

    n11: int
    n10: int
    n01: int
    n00: int

    @property
    def total(self) -> int:
        return self.n11 + self.n10 + self.n01 + self.n00


def _labels(p) -> np.ndarray:
    if isinstance(p, Partition):
        return p.assignment
    return np.asarray(p)


def _aligned(p1, p2) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(p1, Partition) and isinstance(p2, Partition):
        if p1.graph is not p2.graph and tuple(p1.graph.labels) != tuple(p2.graph.labels):
            raise ValueError("partitions are over different vertex sets")
    a, b = _labels(p1), _labels(p2)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"partitions are over different vertex sets ({a.shape} vs {b.shape})")
    _, a = np.unique(a, return_inverse=True)
    _, b = np.unique(b, return_inverse=True)
    return a.reshape(-1), b.reshape(-1)


def contingency(p1, p2) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Non-zero contingency cells plus the two marginals, as int64 arrays."""
    a, b = _aligned(p1, p2)
    kb = int(b.max()) + 1 if b.size else 0
    _, cells = np.unique(a * kb + b, return_counts=True)
    return cells, np.bincount(a), np.bincount(b)


def _pairs(x: np.ndarray) -> int:
    x = x.astype(object)
    return int((x * (x - 1) // 2).sum()) if x.size else 0


def pair_counts(p1, p2) -> PairCounts:
    cells, ra, rb = contingency(p1, p2)
    n = int(ra.sum())
    n11 = _pairs(cells)
    same1, same2 = _pairs(ra), _pairs(rb)
    n10, n01 = same1 - n11, same2 - n11
    return PairCounts(n11, n10, n01, n * (n - 1) // 2 - n11 - n10 - n01)


def rand_index(p1, p2) -> float:
    c = pair_counts(p1, p2)
    if c.total == 0:
        raise ValueError("Rand index needs at least two vertices")
    return (c.n11 + c.n00) / c.total


def jaccard_index(p1, p2) -> float:
    c = pair_counts(p1, p2)
    if c.total == 0:
        raise ValueError("Jaccard index needs at least two vertices")
    denom = c.n11 + c.n10 + c.n01
    # both partitions all-singletons
    if denom == 0:
        return 1.0
    return c.n11 / denom


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


NMI_NORMALIZATION = "arithmetic"


def nmi(p1, p2, normalization: str = NMI_NORMALIZATION) -> float:
    """Normalized mutual information with natural logs.

    ``normalization`` selects the denominator: ``"arithmetic"`` ((H1 + H2) / 2,
    the default), ``"geometric"`` (sqrt(H1 H2)) or ``"max"``. Two single-community
    partitions score 1; if exactly one has zero entropy the score is 0.
    """
    a, b = _aligned(p1, p2)
    n = a.size
    if n == 0:
        raise ValueError("empty partitions")
    kb = int(b.max()) + 1
    keys, cells = np.unique(a * kb + b, return_counts=True)
    ra, rb = np.bincount(a), np.bincount(b)
    h1, h2 = _entropy(ra, n), _entropy(rb, n)
    if h1 == 0.0 and h2 == 0.0:
        return 1.0
    if h1 == 0.0 or h2 == 0.0:
        return 0.0
    ia, ib = keys // kb, keys % kb
    mi = float(np.sum(cells / n * np.log(cells * n / (ra[ia] * rb[ib]).astype(np.float64))))
    if normalization == "geometric":
        denom = math.sqrt(h1 * h2)
    elif normalization == "arithmetic":
        denom = 0.5 * (h1 + h2)
    elif normalization == "max":
        denom = max(h1, h2)
    else:
        raise ValueError(f"unknown NMI normalization {normalization!r}")
    return min(1.0, max(0.0, mi / denom))


METRICS = {
    "rand": rand_index,
    "jaccard": jaccard_index,
    "nmi": nmi,
}


def get_metric(name: str):
    try:
        return METRICS[name]
    except KeyError:
        raise ValueError(f"unknown metric {name!r}; choose from {sorted(METRICS)}") from None
