import numpy as np
import pytest

from commspread import centrality as cen
from commspread.centrality import Measure, ScoreVector
from commspread.community import Partition
from commspread.errors import ConfigError, StatisticUndefined
from commspread.graph import largest_connected_component
from commspread.pipeline import (
    CorrelationMatrix,
    correlation_heatmap,
    cross_network_pearson,
    delta_r_sweep,
    lcc_after_removals,
    lcc_dismantling,
    mean_correlation,
    mu_regression,
)
from commspread.sir import SirConfig
from commspread.stats import kendall_tau_b, pearson
from commspread.synthetic import planted_partition

from conftest import random_graph


def small_benchmark(seed=0):
    g, comm = planted_partition(120, 4, 6, 0.2, seed)
    p = Partition.from_assignment(g, comm)
    return g, p, cen.compute_all(g, p, skipped={})


def test_heatmap_diagonal_and_recomputation():
    g, p, scores = small_benchmark()
    h = correlation_heatmap(scores, "bench")
    assert np.array_equal(np.diag(h.values), np.ones(len(h.measure_ids)))
    assert Measure.DEGREE not in h.measure_ids
    for a, b, t in h.pairs():
        assert t == kendall_tau_b(scores[a].scores, scores[b].scores)
    assert np.array_equal(h.values, h.values.T)


def test_cbc_tracks_degree_on_fixture(fixture_graph, fixture_partition):
    scores = cen.compute_all(fixture_graph, fixture_partition, [Measure.DEGREE, Measure.CBC])
    h = correlation_heatmap(scores, measures=[Measure.DEGREE, Measure.CBC])
    assert h.values[0, 1] == pytest.approx(1.0)


def heat(values, nid="n", k=4):
    m = np.eye(k)
    m[np.triu_indices(k, 1)] = values
    m = np.triu(m) + np.triu(m, 1).T
    return CorrelationMatrix(nid, tuple(cen.COMMUNITY_AWARE[:k]), m)


def test_cross_network_identical_is_one():
    g, p, scores = small_benchmark()
    h = correlation_heatmap(scores, "a")
    out = cross_network_pearson([h, CorrelationMatrix("b", h.measure_ids, h.values.copy())])
    assert out[0, 1] == pytest.approx(1.0)


def test_cross_network_negated_measure_lowers_rho():
    g, p, scores = small_benchmark(1)
    flipped = dict(scores)
    mv = scores[Measure.MV_PLUS]
    flipped[Measure.MV_PLUS] = ScoreVector(mv.measure, -mv.scores)
    a, b = correlation_heatmap(scores, "a"), correlation_heatmap(flipped, "b")
    diff = np.argwhere(~np.isclose(a.values, b.values))
    mv_at = a.measure_ids.index(Measure.MV_PLUS)
    assert all(mv_at in pair for pair in diff.tolist())
    assert cross_network_pearson([a, b])[0, 1] < 1.0


def test_cross_network_matches_direct_calls():
    hs = [heat([0.1, 0.5, 0.3, 0.7, 0.2, 0.9], "a"), heat([0.2, 0.4, 0.3, 0.8, 0.1, 0.7], "b"),
          heat([0.9, 0.1, 0.5, 0.2, 0.6, 0.3], "c")]
    out = cross_network_pearson(hs)
    for i in range(3):
        for j in range(3):
            expected = 1.0 if i == j else pearson(hs[i].upper_triangle(), hs[j].upper_triangle())
            assert out[i, j] == pytest.approx(expected)


def test_cross_network_needs_two():
    with pytest.raises(ConfigError):
        cross_network_pearson([heat([0.1] * 6)])


def test_mean_correlation_skips_mv():
    h = CorrelationMatrix("x", (Measure.PC, Measure.MV_PLUS, Measure.CBC),
                          np.array([[1, -0.9, 0.4], [-0.9, 1, -0.5], [0.4, -0.5, 1.0]]))
    assert mean_correlation(h) == pytest.approx(0.4)


def test_mu_regression_affine_and_flat():
    mus = [0.1, 0.2, 0.3, 0.4]
    hs = [heat([0.2 + 0.5 * m] * 6, str(m)) for m in mus]
    r = mu_regression(mus, hs)
    assert r.slope == pytest.approx(0.5) and r.p_value < 1e-10
    flat = [heat([0.3] * 6, str(m)) for m in mus[:3]]
    assert mu_regression(mus[:3], flat).slope == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(StatisticUndefined):
        mu_regression(mus[:2], hs[:2])


def curves_by_measure(curves):
    return {c.measure: c for c in curves}


def test_delta_r_zero_cases(fixture_graph, fixture_partition):
    scores = cen.compute_all(fixture_graph, fixture_partition)
    grid = [0.2, 0.5, 1.0]
    zero = delta_r_sweep(fixture_graph, scores, grid, SirConfig(0.0, runs=20))
    for c in zero:
        assert [pt.delta_r for pt in c.points] == [0.0, 0.0, 0.0]
        assert [pt.mean_r_c for pt in c.points] == [1, 3, 6]
    live = curves_by_measure(delta_r_sweep(fixture_graph, scores, grid,
                                           SirConfig(0.4, runs=50, master_seed=3)))
    assert all(pt.delta_r == 0.0 for pt in live[Measure.DEGREE].points)
    assert all(c.points[-1].delta_r == 0.0 for c in live.values())


def test_delta_r_parallel_matches_sequential():
    from concurrent.futures import ProcessPoolExecutor
    g, p, scores = small_benchmark(2)
    cfg = SirConfig(0.15, runs=20, master_seed=5)
    seq = delta_r_sweep(g, scores, [0.05, 0.1], cfg)
    with ProcessPoolExecutor(2) as ex:
        par = delta_r_sweep(g, scores, [0.05, 0.1], cfg, executor=ex)
    assert seq == par


def test_lcc_fixture_degree_ranking(fixture_graph, fixture_partition):
    scores = {Measure.DEGREE: cen.degree_centrality(fixture_graph)}
    curve = lcc_dismantling(fixture_graph, scores, [0.0, 1 / 3, 1.0])[Measure.DEGREE]
    assert curve == [(0.0, 6), (1 / 3, 2), (1.0, 0)]


def test_reverse_union_find_matches_direct_recomputation():
    rng = np.random.default_rng(13)
    for _ in range(20):
        n = int(rng.integers(1, 50))
        g = random_graph(rng, n, rng.uniform(0.02, 0.2))
        order = rng.permutation(n)
        curve = lcc_after_removals(g, order)
        for r in range(n + 1):
            assert curve[r] == largest_connected_component(g, order[:r].tolist())


def test_lcc_after_removals_rejects_partial_order(fixture_graph):
    with pytest.raises(ValueError):
        lcc_after_removals(fixture_graph, [0, 1, 2])
