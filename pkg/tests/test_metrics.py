from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commtune.metrics import PairCounts, get_metric, jaccard_index, nmi, pair_counts, rand_index


def pair_oracle(a, b) -> PairCounts:
    """All-pairs enumeration."""
    n11 = n10 = n01 = n00 = 0
    for i, j in itertools.combinations(range(len(a)), 2):
        s1, s2 = a[i] == a[j], b[i] == b[j]
        n11 += s1 and s2
        n10 += s1 and not s2
        n01 += s2 and not s1
        n00 += not s1 and not s2
    return PairCounts(n11, n10, n01, n00)


def nmi_oracle(a, b, norm="arithmetic") -> float:
    """Mutual information from explicit joint and marginal frequencies."""
    n = len(a)
    joint, pa, pb = {}, {}, {}
    for x, y in zip(a, b):
        joint[x, y] = joint.get((x, y), 0) + 1
        pa[x] = pa.get(x, 0) + 1
        pb[y] = pb.get(y, 0) + 1
    h1 = -sum(c / n * math.log(c / n) for c in pa.values())
    h2 = -sum(c / n * math.log(c / n) for c in pb.values())
    if h1 == 0 and h2 == 0:
        return 1.0
    if h1 == 0 or h2 == 0:
        return 0.0
    mi = sum(c / n * math.log((c / n) / ((pa[x] / n) * (pb[y] / n))) for (x, y), c in joint.items())
    denom = {"arithmetic": (h1 + h2) / 2, "geometric": math.sqrt(h1 * h2), "max": max(h1, h2)}[norm]
    return mi / denom


labelings = st.integers(2, 9).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, n - 1), min_size=n, max_size=n),
                        st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
)


def test_pair_counts_examples():
    same = [0, 0, 1, 1]
    assert pair_counts(same, same) == PairCounts(2, 0, 0, 4)
    assert pair_counts([0, 0, 1, 1], [0, 0, 0, 1]) == PairCounts(1, 1, 2, 2)
    assert pair_counts([0, 1, 2, 3], [0, 0, 0, 0]) == PairCounts(0, 0, 6, 0)


def test_rand_and_jaccard_examples():
    a, b = [0, 0, 1, 1], [0, 0, 0, 1]
    assert rand_index(a, a) == 1.0
    assert rand_index(a, b) == 0.5
    assert rand_index([0, 1, 2, 3], [0, 0, 0, 0]) == 0.0
    assert jaccard_index(a, a) == 1.0
    assert jaccard_index(a, b) == 0.25
    assert jaccard_index([0, 1, 2], [2, 1, 0]) == 1.0


def test_nmi_examples():
    assert nmi([0, 0, 1, 1], [1, 1, 0, 0]) == pytest.approx(1.0)
    assert nmi([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-15)
    assert nmi([0, 0, 0], [1, 1, 1]) == 1.0
    assert nmi([0, 0, 0], [0, 1, 1]) == 0.0


def test_nmi_normalizations_differ():
    a, b = [0, 0, 0, 1, 1, 2], [0, 0, 1, 1, 2, 2]
    for norm in ("arithmetic", "geometric", "max"):
        assert nmi(a, b, norm) == pytest.approx(nmi_oracle(a, b, norm), abs=1e-12)
    assert nmi(a, b, "max") <= nmi(a, b, "arithmetic") <= nmi(a, b, "geometric")
    with pytest.raises(ValueError):
        nmi(a, b, "median")


def test_size_errors():
    with pytest.raises(ValueError):
        rand_index([0], [0])
    with pytest.raises(ValueError):
        jaccard_index([0], [1])
    with pytest.raises(ValueError):
        nmi([0, 1], [0, 1, 2])


@settings(max_examples=300, deadline=None)
@given(labelings)
def test_against_oracles(ab):
    a, b = ab
    pc = pair_oracle(a, b)
    assert pair_counts(a, b) == pc
    assert pc.total == len(a) * (len(a) - 1) // 2
    assert nmi(a, b) == pytest.approx(nmi_oracle(a, b), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(labelings, st.permutations(range(9)))
def test_symmetry_relabeling_and_range(ab, perm):
    a, b = ab
    relabeled = [perm[x] for x in a]
    for name in ("rand", "jaccard", "nmi"):
        f = get_metric(name)
        v = f(a, b)
        assert 0.0 <= v <= 1.0
        assert f(b, a) == pytest.approx(v, abs=1e-12)
        assert f(relabeled, b) == pytest.approx(v, abs=1e-12)
        assert f(a, a) == pytest.approx(1.0)


def test_large_counts_are_exact():
    # 10^5 vertices: pair counts exceed 2^32 and must stay integral
    rng = np.random.default_rng(3)
    a = rng.integers(0, 5, 100_000)
    b = rng.integers(0, 7, 100_000)
    pc = pair_counts(a, b)
    assert pc.total == 100_000 * 99_999 // 2
    assert all(isinstance(x, int) for x in (pc.n11, pc.n10, pc.n01, pc.n00))


def test_unknown_metric():
    with pytest.raises(ValueError, match="unknown metric"):
        get_metric("ari")
