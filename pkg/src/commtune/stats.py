"""Unpaired significance test used to compare default and tuned runs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class SignificanceResult:
    mean_default: float
    sd_default: float
    mean_tuned: float
    sd_tuned: float
    t_statistic: float
    p_value: float
    runs_per_arm: int
    df: float = math.nan


def welch_t_test(sample_a, sample_b) -> SignificanceResult:
    """Welch's unequal-variance t-test, two-sided.

    ``sample_a`` is the default arm and ``sample_b`` the tuned arm, so a
    negative statistic means the tuned mean is larger. When both samples
    have zero variance the statistic is 0 and the p-value 1 if the means
    agree; otherwise the difference is certain (infinite t, p = 0).

    Returns
    -------
    SignificanceResult
        ``runs_per_arm`` is the smaller sample size; ``df`` holds the
        Welch-Satterthwaite degrees of freedom.
    """
    a = np.asarray(sample_a, dtype=np.float64).ravel()
    b = np.asarray(sample_b, dtype=np.float64).ravel()
    if a.size < 2 or b.size < 2:
        raise ValueError(f"each sample needs at least 2 values, got {a.size} and {b.size}")
    ma, mb = float(a.mean()), float(b.mean())
    va, vb = float(a.var(ddof=1)), float(b.var(ddof=1))
    sa, sb = va / a.size, vb / b.size
    se2 = sa + sb
    if se2 == 0.0:
        if ma == mb:
            t, p, df = 0.0, 1.0, math.nan
        else:
            t, p, df = math.copysign(math.inf, ma - mb), 0.0, math.nan
    else:
        t = (ma - mb) / math.sqrt(se2)
        # written in variance shares so tiny variances cannot underflow to 0/0
        wa, wb = sa / se2, sb / se2
        df = 1.0 / (wa**2 / (a.size - 1) + wb**2 / (b.size - 1))
        p = float(2.0 * stats.t.sf(abs(t), df))
    return SignificanceResult(ma, math.sqrt(va), mb, math.sqrt(vb), t, p, int(min(a.size, b.size)), df)
