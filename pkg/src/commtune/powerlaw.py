"""Estimate LFR benchmark parameters from an observed graph and a partition."""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .graph import Graph, Partition

SIZE_EXPONENT_FALLBACK = 1.5
ESTIMATE_MODE = "ccdf"


class DegenerateDistributionError(ValueError):
    pass


@dataclass(frozen=True)
class LfrParams:
    n: int
    mean_degree: float
    d_max: int
    degree_exponent: float
    mixing: float
    size_exponent: float
    c_min: int
    c_max: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 1.0 < self.mean_degree <= self.d_max:
            raise ValueError(f"need 1 < mean_degree <= d_max, got {self.mean_degree} and {self.d_max}")
        if self.d_max >= self.n:
            raise ValueError(f"d_max={self.d_max} impossible in a simple graph on {self.n} vertices")
        if not 0.0 <= self.mixing <= 1.0:
            raise ValueError("mixing must lie in [0, 1]")
        if not 1 <= self.c_min <= self.c_max <= self.n:
            raise ValueError(f"need 1 <= c_min <= c_max <= n, got {self.c_min}, {self.c_max}, {self.n}")
        if not (math.isfinite(self.degree_exponent) and math.isfinite(self.size_exponent)):
            raise ValueError("exponents must be finite")

    @classmethod
    def from_parts(cls, graph_params: dict, community_params: dict) -> "LfrParams":
        return cls(**graph_params, **community_params)

    def as_dict(self) -> dict:
        return asdict(self)


def _ccdf(values, counts=None, mode: str = "ccdf"):
    x = np.asarray(values, dtype=np.float64)
    w = np.ones_like(x) if counts is None else np.asarray(counts, dtype=np.float64)
    xs, inv = np.unique(x, return_inverse=True)
    mass = np.bincount(inv.reshape(-1), weights=w)
    tail = np.cumsum(mass[::-1])[::-1] / mass.sum()  # P(X >= x)
    if mode in ("ccdf", "truncated"):
        return xs, tail
    if mode == "cdf-tail":
        # P(X > x); the largest value has zero mass and is dropped
        strict = np.append(tail[1:], 0.0)
        return xs[:-1], strict[:-1]
    raise ValueError(f"unknown fit mode {mode!r}")


def _fit_truncated(xs: np.ndarray, tail: np.ndarray) -> float:
    # model: discrete power law on the integers between the smallest and largest observation
    support = np.arange(xs[0], xs[-1] + 1.0)
    at = np.searchsorted(support, xs)
    ly = np.log(tail)

    def loss(a):
        w = support ** (-a)
        model = np.cumsum(w[::-1])[::-1] / w.sum()
        return float(np.sum((np.log(model[at]) - ly) ** 2))

    return float(minimize_scalar(loss, bounds=(1.0, 10.0), method="bounded", options={"xatol": 1e-7}).x)


def fit_powerlaw_exponent(values, counts=None, mode: str = "ccdf", x_min: float | None = None) -> float:
    """Power-law exponent by least squares on the log-log CCDF.

    Parameters
    ----------
    values : array_like
        Positive observations (degrees, community sizes).
    counts : array_like, optional
        Non-negative multiplicities for ``values``; may be fractional.
    mode : {"ccdf", "cdf-tail", "truncated"}
        ``"ccdf"`` fits a straight line to ``log P(X >= x)`` and returns
        ``1 - slope``; ``"cdf-tail"`` does the same on ``P(X > x)``.
        ``"truncated"`` fits the CCDF of a discrete power law restricted to
        the observed range, which removes the downward bend a hard maximum
        puts on the tail.
    x_min : float, optional
        Ignore values below this cutoff.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.size and x.min() < 1:
        raise ValueError("power-law fit needs values >= 1")
    if x_min is not None:
        keep = x >= x_min
        x = x[keep]
        if counts is not None:
            counts = np.asarray(counts)[keep]
    if np.unique(x).size < 3:
        raise DegenerateDistributionError("degenerate distribution: fewer than 3 distinct values")
    xs, tail = _ccdf(x, counts, mode)
    if mode == "truncated":
        if not np.allclose(xs, np.rint(xs)):
            raise ValueError("truncated fit needs integer values")
        return _fit_truncated(xs, tail)
    slope = np.polyfit(np.log(xs), np.log(tail), 1)[0]
    return float(1.0 - slope)


def estimate_graph_params(graph: Graph, mode: str = ESTIMATE_MODE, x_min: float | None = None) -> dict:
    """n, mean degree, max degree and degree exponent of ``graph``."""
    deg = graph.degree_sequence()
    n = graph.n
    return {
        "n": n,
        "mean_degree": graph.total_weight_2m / n,
        "d_max": int(deg.max()),
        "degree_exponent": fit_powerlaw_exponent(deg[deg >= 1], mode=mode, x_min=x_min),
    }


def estimate_community_params(graph: Graph, partition: Partition, mode: str = ESTIMATE_MODE) -> dict:
    """Mixing, size exponent and size bounds implied by ``partition``.

    If fewer than three distinct community sizes exist the size exponent
    falls back to 1.5 with a warning.
    """
    if partition.n_communities == 0:
        raise ValueError("empty partition")
    if graph.m == 0:
        raise ValueError("mixing undefined for a graph without edges")
    sizes = partition.community_members[partition.community_members > 0]
    try:
        size_exp = fit_powerlaw_exponent(sizes, mode=mode)
    except DegenerateDistributionError:
        warnings.warn(
            f"only {np.unique(sizes).size} distinct community sizes; using size exponent {SIZE_EXPONENT_FALLBACK}",
            stacklevel=2,
        )
        size_exp = SIZE_EXPONENT_FALLBACK
    return {
        "mixing": partition.m_out / graph.m,
        "size_exponent": size_exp,
        "c_min": int(sizes.min()),
        "c_max": int(sizes.max()),
    }


def estimate_lfr_params(graph: Graph, partition: Partition, **kw) -> LfrParams:
    return LfrParams.from_parts(estimate_graph_params(graph, **kw), estimate_community_params(graph, partition))
