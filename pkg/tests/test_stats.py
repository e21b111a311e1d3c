import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commspread.errors import StatisticUndefined
from commspread.stats import kendall_pair_counts, kendall_tau_b, ols_regression, pearson


def naive_counts(x, y):
    nc = nd = tx = ty = both = 0
    n = len(x)
    for i in range(n):
        for j in range(i + 1, n):
            dx, dy = x[i] - x[j], y[i] - y[j]
            if dx == 0 and dy == 0:
                both += 1
            elif dx == 0:
                tx += 1
            elif dy == 0:
                ty += 1
            elif (dx > 0) == (dy > 0):
                nc += 1
            else:
                nd += 1
    return nc, nd, tx, ty, both


def naive_tau_b(x, y):
    nc, nd, tx, ty, _ = naive_counts(x, y)
    return (nc - nd) / math.sqrt((nc + nd + tx) * (nc + nd + ty))


def test_tau_examples():
    assert kendall_tau_b([1, 2, 3, 4], [1, 2, 3, 4]) == 1.0
    assert kendall_tau_b([1, 2, 3, 4], [4, 3, 2, 1]) == -1.0


def test_counts_match_enumeration_on_small_vectors():
    rng = np.random.default_rng(0)
    for _ in range(300):
        n = int(rng.integers(2, 13))
        x = rng.integers(0, 4, n).tolist()
        y = rng.integers(0, 4, n).tolist()
        nc, nd, tx, ty, both = naive_counts(x, y)
        c = kendall_pair_counts(x, y)
        assert (c.concordant_minus_discordant, c.untied, c.ties_x, c.ties_y, c.ties_both) == \
            (nc - nd, nc + nd, tx, ty, both)


def test_tau_matches_enumeration_on_real_values():
    rng = np.random.default_rng(1)
    for _ in range(50):
        n = int(rng.integers(2, 60))
        x = np.round(rng.normal(size=n), 1)
        y = np.round(x + rng.normal(size=n), 1)
        try:
            expected = naive_tau_b(x.tolist(), y.tolist())
        except ZeroDivisionError:
            continue
        assert kendall_tau_b(x, y) == expected


def test_constant_input_is_undefined():
    with pytest.raises(StatisticUndefined):
        kendall_tau_b([1, 1, 1], [1, 2, 3])
    with pytest.raises(StatisticUndefined):
        kendall_tau_b([1], [1])


tied = st.lists(st.integers(0, 5), min_size=2, max_size=40)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_tau_properties(data):
    x = data.draw(tied)
    y = data.draw(st.lists(st.integers(0, 5), min_size=len(x), max_size=len(x)))
    try:
        t = kendall_tau_b(x, y)
    except StatisticUndefined:
        return
    assert -1.0 - 1e-12 <= t <= 1.0 + 1e-12
    assert kendall_tau_b(y, x) == pytest.approx(t, abs=1e-12)
    assert kendall_tau_b(x, [-v for v in y]) == pytest.approx(-t, abs=1e-12)
    # strictly increasing transforms leave tau unchanged
    assert kendall_tau_b([3 * v + 7 for v in x], [v ** 3 for v in y]) == pytest.approx(t, abs=1e-12)
    perm = data.draw(st.permutations(range(len(x))))
    assert kendall_tau_b([x[i] for i in perm], [y[i] for i in perm]) == pytest.approx(t, abs=1e-12)


def test_pearson_examples():
    x = np.arange(10.0)
    assert pearson(x, 2 * x + 1) == pytest.approx(1.0)
    assert pearson(x, -x) == pytest.approx(-1.0)
    assert pearson([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)
    with pytest.raises(StatisticUndefined):
        pearson([1, 2, 3], [5, 5, 5])


def test_ols_perfect_fit():
    r = ols_regression([1, 2, 3], [0.5, 1.0, 1.5])
    assert r.slope == pytest.approx(0.5) and r.r_squared == pytest.approx(1.0)
    assert r.p_value < 1e-10


def test_ols_constant_response():
    r = ols_regression([0.1, 0.2, 0.3], [0.4, 0.4, 0.4])
    assert r.slope == 0.0 and r.r_squared == 0.0


def test_ols_needs_spread_in_x():
    with pytest.raises(StatisticUndefined):
        ols_regression([1, 1, 1], [1, 2, 3])
    with pytest.raises(StatisticUndefined):
        ols_regression([1, 2], [1, 2])


def mp_reference(xs, ys):
    mpmath.mp.dps = 50
    x = [mpmath.mpf(v) for v in xs]
    y = [mpmath.mpf(v) for v in ys]
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    sxx = sum((a - mx) ** 2 for a in x)
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    slope = sxy / sxx
    sse = sum((b - my - slope * (a - mx)) ** 2 for a, b in zip(x, y))
    df = n - 2
    t = slope / mpmath.sqrt(sse / df / sxx)
    p = mpmath.betainc(mpmath.mpf(df) / 2, mpmath.mpf(1) / 2, 0, df / (df + t * t),
                       regularized=True)
    return float(slope), float(my - slope * mx), float(p)


def test_ols_against_high_precision_reference():
    xs = [0.05, 0.11, 0.14, 0.2, 0.26, 0.31, 0.35, 0.4, 0.44, 0.5]
    ys = [0.21, 0.30, 0.26, 0.35, 0.33, 0.41, 0.39, 0.47, 0.44, 0.52]
    slope, intercept, p = mp_reference(xs, ys)
    r = ols_regression(xs, ys)
    assert r.slope == pytest.approx(slope, abs=1e-10)
    assert r.intercept == pytest.approx(intercept, abs=1e-10)
    assert r.p_value == pytest.approx(p, abs=1e-10)


def test_ols_weak_relation_p_value():
    rng = np.random.default_rng(12)
    xs = rng.normal(size=25)
    ys = 0.1 * xs + rng.normal(size=25)
    slope, _, p = mp_reference(xs.tolist(), ys.tolist())
    r = ols_regression(xs, ys)
    assert r.slope == pytest.approx(slope, abs=1e-10)
    assert r.p_value == pytest.approx(p, abs=1e-10)
