"""Kendall tau-b, Pearson correlation and simple linear regression."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .errors import StatisticUndefined


@dataclass(frozen=True)
class PairCounts:
    """Pair statistics behind tau-b.

    ``ties_x`` / ``ties_y`` count pairs tied in that variable only; pairs tied
    in both are in neither count nor in ``concordant - discordant``.
    """

    n: int
    concordant_minus_discordant: int
    untied: int
    ties_x: int
    ties_y: int
    ties_both: int


def _tied_pairs(sorted_values) -> int:
    if len(sorted_values) < 2:
        return 0
    change = np.flatnonzero(sorted_values[1:] != sorted_values[:-1]) + 1
    runs = np.diff(np.concatenate([[0], change, [len(sorted_values)]]))
    return int(np.sum(runs * (runs - 1) // 2))


def _count_inversions(seq) -> int:
    """Number of pairs ``i < j`` with ``seq[i] > seq[j]`` (bottom-up merge sort)."""
    a = list(seq)
    n = len(a)
    buf = [0] * n
    inv = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if a[j] < a[i]:
                    buf[k] = a[j]
                    inv += mid - i
                    j += 1
                else:
                    buf[k] = a[i]
                    i += 1
                k += 1
            buf[k:hi] = a[i:mid] + a[j:hi]
            a[lo:hi] = buf[lo:hi]
        width *= 2
    return inv


def kendall_pair_counts(x, y) -> PairCounts:
    """Concordance counts in O(n log n) (Knight's algorithm)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d sequences of equal length")
    n = len(x)
    if n < 2:
        raise StatisticUndefined("tau-b needs at least two observations")
    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]
    n0 = n * (n - 1) // 2
    n1 = _tied_pairs(xs)
    # joint ties: runs equal in both x and y
    same = (xs[1:] == xs[:-1]) & (ys[1:] == ys[:-1])
    edges = np.flatnonzero(~same) + 1
    runs = np.diff(np.concatenate([[0], edges, [n]]))
    n3 = int(np.sum(runs * (runs - 1) // 2))
    # dense ranks keep the merge sort on small ints
    y_rank = np.unique(ys, return_inverse=True)[1]
    swaps = _count_inversions(y_rank.tolist())
    n2 = _tied_pairs(np.sort(ys))
    untied = n0 - n1 - n2 + n3
    return PairCounts(n, untied - 2 * swaps, untied, n1 - n3, n2 - n3, n3)


def tau_from_counts(c: PairCounts) -> float:
    denom = (c.untied + c.ties_x) * (c.untied + c.ties_y)
    if denom == 0:
        raise StatisticUndefined("tau-b undefined: one of the inputs is constant")
    return c.concordant_minus_discordant / math.sqrt(denom)


def kendall_tau_b(x, y) -> float:
    return tau_from_counts(kendall_pair_counts(x, y))


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d sequences of equal length")
    if len(x) < 2:
        raise StatisticUndefined("Pearson correlation needs at least two observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise StatisticUndefined("Pearson correlation undefined for zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    p_value: float
    r_squared: float
    n: int
    stderr: float = float("nan")
    t_stat: float = float("nan")


def t_two_sided_p(t, df) -> float:
    """Two-sided tail probability of Student's t via the regularised incomplete beta."""
    if math.isinf(t):
        return 0.0
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def ols_regression(x, y) -> RegressionResult:
    """Least-squares line ``y = intercept + slope * x`` with a t-test on the slope."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d sequences of equal length")
    n = len(x)
    if n < 3:
        raise StatisticUndefined("regression needs at least three points")
    dx = x - x.mean()
    # a constant response must give an exactly flat line
    dy = y - y.mean() if np.ptp(y) > 0 else np.zeros_like(y)
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise StatisticUndefined("regression undefined: x has zero variance")
    slope = float(dx @ dy) / sxx
    intercept = float(y[0]) if not dy.any() else float(y.mean() - slope * x.mean())
    resid = dy - slope * dx
    sse = float(resid @ resid)
    syy = float(dy @ dy)
    r2 = 0.0 if syy == 0.0 else max(0.0, min(1.0, 1.0 - sse / syy))
    df = n - 2
    se = math.sqrt(sse / df / sxx)
    if se == 0.0:
        t = 0.0 if slope == 0.0 else math.copysign(math.inf, slope)
        p = 1.0 if slope == 0.0 else 0.0
    else:
        t = slope / se
        p = t_two_sided_p(t, df)
    return RegressionResult(slope, intercept, p, r2, n, se, t)
