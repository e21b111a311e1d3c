"""Experiment orchestration: correlation heatmaps, cross-network comparison,
mixing-parameter regression, outbreak-size sweeps and dismantling curves."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field, replace
from functools import partial
from pathlib import Path

import numpy as np

from . import centrality as cen
from .centrality import Measure, MeasureConfig
from .community import (
    Partition,
    StrengthCategory,
    load_partition,
    louvain_partition,
    mixing_parameter,
    modularity,
    strength_category,
)
from .errors import (
    ComputationError,
    ConfigError,
    DataError,
    StatisticUndefined,
)
from .graph import Graph, load_edge_list, mean_degree_moments
from .sir import SirConfig, SirOutcome, epidemic_threshold, run_sir, seed_count
from .stats import RegressionResult, kendall_tau_b, ols_regression, pearson

log = logging.getLogger(__name__)

_FLOOR_EPS = 1e-9
# measures left out of the per-network mean correlation
MEAN_TAU_EXCLUDED = (Measure.DEGREE, Measure.MV_PLUS, Measure.MV_MINUS)


# -- correlation ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    network_id: str
    measure_ids: tuple[Measure, ...]
    values: np.ndarray

    def upper_triangle(self) -> np.ndarray:
        i, j = np.triu_indices(len(self.measure_ids), k=1)
        return self.values[i, j]

    def pairs(self):
        for a in range(len(self.measure_ids)):
            for b in range(a + 1, len(self.measure_ids)):
                yield self.measure_ids[a], self.measure_ids[b], float(self.values[a, b])

    def restrict(self, measures) -> CorrelationMatrix:
        idx = [self.measure_ids.index(m) for m in measures]
        return CorrelationMatrix(self.network_id, tuple(measures),
                                 self.values[np.ix_(idx, idx)])


def correlation_heatmap(scores, network_id="", measures=None) -> CorrelationMatrix:
    """Pairwise tau-b between the raw score vectors of ``measures``.

    Defaults to the community-aware measures present in ``scores``.
    """
    if measures is None:
        measures = [m for m in cen.COMMUNITY_AWARE if m in scores]
    measures = tuple(measures)
    k = len(measures)
    values = np.eye(k)
    for a in range(k):
        for b in range(a + 1, k):
            try:
                t = kendall_tau_b(scores[measures[a]].scores, scores[measures[b]].scores)
            except StatisticUndefined as exc:
                raise StatisticUndefined(
                    f"{network_id}: tau-b({measures[a].value}, {measures[b].value}): {exc}"
                ) from None
            values[a, b] = values[b, a] = t
    return CorrelationMatrix(network_id, measures, values)


def cross_network_pearson(heatmaps) -> np.ndarray:
    """Pearson correlation between the flattened heatmaps of every network pair."""
    heatmaps = list(heatmaps)
    if len(heatmaps) < 2:
        raise ConfigError("cross-network comparison needs at least two networks")
    order = heatmaps[0].measure_ids
    for h in heatmaps[1:]:
        if h.measure_ids != order:
            raise ConfigError(f"network {h.network_id!r} uses a different measure ordering")
    vectors = [h.upper_triangle() for h in heatmaps]
    for h, v in zip(heatmaps, vectors):
        if v.size < 2 or np.all(v == v[0]):
            raise StatisticUndefined(f"heatmap vector of {h.network_id!r} has zero variance")
    k = len(heatmaps)
    out = np.eye(k)
    for a in range(k):
        for b in range(a + 1, k):
            out[a, b] = out[b, a] = pearson(vectors[a], vectors[b])
    return out


def mean_correlation(h: CorrelationMatrix, exclude=MEAN_TAU_EXCLUDED) -> float:
    """Mean tau-b over the pairs of remaining community-aware measures."""
    keep = [m for m in h.measure_ids if m not in exclude]
    if len(keep) < 2:
        raise StatisticUndefined(f"{h.network_id}: fewer than two measures for the mean")
    return float(h.restrict(keep).upper_triangle().mean())


def mu_regression(mixing, heatmaps) -> RegressionResult:
    """OLS of per-network mean tau-b on the mixing parameter."""
    mixing = list(mixing)
    heatmaps = list(heatmaps)
    if len(mixing) != len(heatmaps):
        raise ValueError("one mixing parameter per heatmap is required")
    if len(mixing) < 3:
        raise StatisticUndefined("the regression needs at least three networks")
    return ols_regression(mixing, [mean_correlation(h) for h in heatmaps])


# -- outbreak sweep -----------------------------------------------------------

@dataclass(frozen=True)
class DeltaRPoint:
    f_o: float
    seeds: int
    delta_r: float | None
    mean_r_c: float
    mean_r_b: float
    std_r_c: float


@dataclass(frozen=True)
class DeltaRCurve:
    network_id: str
    measure: Measure
    lam: float
    points: tuple[DeltaRPoint, ...]


def sweep_point(g: Graph, rankings, f_o, cfg: SirConfig) -> dict:
    """SIR outcomes at one seed fraction for every ranking (keyed like ``rankings``).

    Rankings that select the same seed set share one simulation.
    """
    k = seed_count(f_o, g.node_count)
    cache = {}
    out = {}
    for key, order in rankings.items():
        seeds = tuple(sorted(int(v) for v in order[:k]))
        if seeds not in cache:
            cache[seeds] = run_sir(g, seeds, cfg)
        out[key] = cache[seeds]
    return out


def delta_r_sweep(g: Graph, scores, fo_grid, cfg: SirConfig, network_id="",
                  executor=None) -> list[DeltaRCurve]:
    """Relative outbreak gain over the degree ranking for each measure and seed fraction.

    The baseline and every measure use identical per-run random streams, so a
    measure that picks the same seeds as the baseline scores exactly 0.
    """
    rankings = {m: sv.ranking for m, sv in scores.items()}
    rankings["__baseline__"] = cen.degree_centrality(g).ranking
    fo_grid = [float(f) for f in fo_grid]
    task = partial(sweep_point, g, rankings, cfg=cfg)
    if executor is None:
        results = [task(f) for f in fo_grid]
    else:
        results = list(executor.map(task, fo_grid))
    curves = []
    for m in scores:
        pts = []
        for f, res in zip(fo_grid, results):
            rc: SirOutcome = res[m]
            rb: SirOutcome = res["__baseline__"]
            if rb.mean_recovered > 0:
                dr = (rc.mean_recovered - rb.mean_recovered) / rb.mean_recovered
            else:
                log.warning("%s %s f_o=%g: baseline outbreak is 0, delta R undefined",
                            network_id, m.value, f)
                dr = None
            pts.append(DeltaRPoint(f, rc.seed_set_size, dr, rc.mean_recovered,
                                   rb.mean_recovered, rc.std_recovered))
        curves.append(DeltaRCurve(network_id, m, cfg.lam, tuple(pts)))
    return curves


# -- dismantling ----------------------------------------------------------------

def lcc_after_removals(g: Graph, order) -> np.ndarray:
    """``out[r]`` = LCC size once the first ``r`` nodes of ``order`` are deleted.

    Nodes are added back in reverse order with a union-find, so the whole
    curve costs one pass over the edges.
    """
    n = g.node_count
    order = np.asarray(order, dtype=np.int64)
    if sorted(order.tolist()) != list(range(n)):
        raise ValueError("order must be a permutation of the nodes")
    parent = list(range(n))
    size = [1] * n
    present = [False] * n
    indptr = g.indptr.tolist()
    nbr = g.indices.tolist()

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    out = [0] * (n + 1)
    best = 0
    for r in range(n - 1, -1, -1):
        v = int(order[r])
        present[v] = True
        for u in nbr[indptr[v]:indptr[v + 1]]:
            if present[u]:
                a, b = find(v), find(u)
                if a != b:
                    if size[a] < size[b]:
                        a, b = b, a
                    parent[b] = a
                    size[a] += size[b]
        best = max(best, size[find(v)])
        out[r] = best
    return np.asarray(out, dtype=np.int64)


def removal_count(fraction, n) -> int:
    if not 0.0 <= fraction <= 1.0:
        raise ConfigError(f"removal fraction {fraction} outside [0, 1]")
    return min(n, math.floor(fraction * n + _FLOOR_EPS))


def lcc_dismantling(g: Graph, scores, fractions) -> dict[Measure, list[tuple[float, int]]]:
    """LCC size after deleting the top fraction of each static ranking."""
    fractions = [float(f) for f in fractions]
    out = {}
    for m, sv in scores.items():
        curve = lcc_after_removals(g, sv.ranking)
        out[m] = [(f, int(curve[removal_count(f, g.node_count)])) for f in fractions]
    return out


# -- experiment -----------------------------------------------------------------

def default_fo_grid():
    return [round(0.01 * i, 2) for i in range(1, 51)]


def default_lcc_fractions():
    return [round(0.01 * i, 2) for i in range(0, 51)]


@dataclass(frozen=True)
class NetworkSpec:
    network_id: str
    graph_path: Path
    partition_path: Path | None = None
    louvain_seed: int | None = None
    lcc_only: bool = False
    delimiter: str | None = None

    def __post_init__(self):
        if (self.partition_path is None) == (self.louvain_seed is None):
            raise ConfigError(f"network {self.network_id!r}: give exactly one of "
                              "a partition file or a Louvain seed")


@dataclass(frozen=True)
class ExperimentSpec:
    networks: tuple[NetworkSpec, ...]
    measures: tuple[Measure, ...] = cen.DEFAULT_MEASURES
    fo_grid: tuple[float, ...] = field(default_factory=lambda: tuple(default_fo_grid()))
    lcc_fractions: tuple[float, ...] = field(default_factory=lambda: tuple(default_lcc_fractions()))
    runs: int = 100
    gamma: float = 1.0
    master_seed: int = 0
    lambda_multipliers: tuple[float, ...] = (1.0,)
    measure_config: MeasureConfig = field(default_factory=MeasureConfig)
    output_dir: Path = Path("results")

    def __post_init__(self):
        if not self.networks:
            raise ConfigError("experiment lists no networks")
        ids = [n.network_id for n in self.networks]
        if len(set(ids)) != len(ids):
            raise ConfigError("network ids must be unique")
        grid = list(self.fo_grid)
        if not grid or any(not 0.0 < f <= 1.0 for f in grid):
            raise ConfigError("fo_grid values must lie in (0, 1]")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("fo_grid must be strictly increasing")
        if any(not 0.0 <= f <= 1.0 for f in self.lcc_fractions):
            raise ConfigError("lcc fractions must lie in [0, 1]")
        if not self.lambda_multipliers or any(x <= 0 for x in self.lambda_multipliers):
            raise ConfigError("lambda multipliers must be positive")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")


@dataclass(frozen=True)
class NetworkSummary:
    network_id: str
    nodes: int
    edges: int
    mean_degree: float
    second_moment: float
    epidemic_threshold: float | None
    communities: int
    modularity: float | None
    mixing: float | None
    category: StrengthCategory | None
    partition_source: str


@dataclass
class NetworkResult:
    summary: NetworkSummary
    graph: Graph
    partition: Partition
    scores: dict
    heatmap: CorrelationMatrix | None = None
    delta_r: list = field(default_factory=list)
    lcc: dict = field(default_factory=dict)
    skips: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    networks: list[NetworkResult]
    cross_pearson: np.ndarray | None = None
    cross_ids: tuple[str, ...] = ()
    cross_measures: tuple[Measure, ...] = ()
    regression: RegressionResult | None = None
    skips: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)


def _optional(fn, *args):
    try:
        return fn(*args)
    except ComputationError:
        return None


def prepare_network(ns: NetworkSpec, measures, mcfg: MeasureConfig) -> NetworkResult:
    """Load, partition and score one network."""
    t0 = time.perf_counter()
    try:
        g = load_edge_list(ns.graph_path, delimiter=ns.delimiter, lcc_only=ns.lcc_only)
    except DataError as exc:
        raise DataError(f"{ns.graph_path}: {exc}") from None
    if ns.partition_path is not None:
        try:
            p = load_partition(ns.partition_path, g, delimiter=ns.delimiter)
        except DataError as exc:
            raise DataError(f"{ns.partition_path}: {exc}") from None
        source = f"file:{ns.partition_path.name}"
    else:
        p = louvain_partition(g, ns.louvain_seed)
        source = f"louvain:{ns.louvain_seed}"
    t1 = time.perf_counter()
    k1, k2 = mean_degree_moments(g)
    mu = _optional(mixing_parameter, g, p)
    summary = NetworkSummary(
        ns.network_id, g.node_count, g.edge_count, k1, k2,
        _optional(epidemic_threshold, g), p.community_count,
        _optional(modularity, g, p), mu,
        strength_category(mu) if mu is not None else None, source)
    skipped = {}
    scores = cen.compute_all(g, p, measures, mcfg, skipped=skipped)
    skips = [{"network": ns.network_id, "measure": m.value, "stage": "centrality",
              "reason": reason} for m, reason in skipped.items()]
    t2 = time.perf_counter()
    return NetworkResult(summary, g, p, scores, skips=skips,
                         timings={"load_partition": t1 - t0, "centrality": t2 - t1})


def run_experiment(spec: ExperimentSpec, executor=None) -> ExperimentResult:
    """Run every analysis in ``spec``; outputs are identical with or without ``executor``."""
    t_start = time.perf_counter()
    prep = partial(prepare_network, measures=spec.measures, mcfg=spec.measure_config)
    if executor is None:
        nets = [prep(ns) for ns in spec.networks]
    else:
        nets = list(executor.map(prep, spec.networks))
    result = ExperimentResult(spec, nets)

    for net in nets:
        nid = net.summary.network_id
        t0 = time.perf_counter()
        try:
            net.heatmap = correlation_heatmap(net.scores, nid)
        except StatisticUndefined as exc:
            net.skips.append({"network": nid, "stage": "heatmap", "reason": str(exc)})
        t1 = time.perf_counter()
        lam_th = net.summary.epidemic_threshold
        if lam_th is None:
            net.skips.append({"network": nid, "stage": "sir",
                              "reason": "epidemic threshold undefined"})
        else:
            for mult in spec.lambda_multipliers:
                lam = min(1.0, lam_th * mult)
                cfg = SirConfig(lam, spec.gamma, spec.runs, spec.master_seed)
                net.delta_r.extend(delta_r_sweep(net.graph, net.scores, spec.fo_grid, cfg,
                                                 nid, executor))
            _check_degree_curve(net)
        t2 = time.perf_counter()
        net.lcc = lcc_dismantling(net.graph, net.scores, spec.lcc_fractions)
        t3 = time.perf_counter()
        net.timings.update(heatmap=t1 - t0, sir=t2 - t1, dismantling=t3 - t2)

    _cross_network(result)
    result.skips = [s for net in nets for s in net.skips] + result.skips
    result.timings["total"] = time.perf_counter() - t_start
    return result


def _check_degree_curve(net: NetworkResult):
    for curve in net.delta_r:
        if curve.measure is Measure.DEGREE:
            bad = [p.f_o for p in curve.points if p.delta_r != 0.0]
            if bad:
                raise ComputationError(f"{net.summary.network_id}: degree baseline "
                                      f"delta R nonzero at f_o={bad[:3]}")


def _cross_network(result: ExperimentResult):
    usable = [n for n in result.networks if n.heatmap is not None]
    if len(usable) < 2:
        result.skips.append({"stage": "cross_network_pearson",
                             "reason": "fewer than two networks with heatmaps"})
        return
    common = [m for m in usable[0].heatmap.measure_ids
              if all(m in n.heatmap.measure_ids for n in usable)]
    dropped = sorted({m.value for n in usable for m in n.heatmap.measure_ids} -
                     {m.value for m in common})
    if dropped:
        result.skips.append({"stage": "cross_network_pearson",
                             "reason": f"measures missing on some networks: {dropped}"})
    heatmaps = [n.heatmap.restrict(common) for n in usable]
    result.cross_ids = tuple(n.summary.network_id for n in usable)
    result.cross_measures = tuple(common)
    try:
        result.cross_pearson = cross_network_pearson(heatmaps)
    except (StatisticUndefined, ConfigError) as exc:
        result.skips.append({"stage": "cross_network_pearson", "reason": str(exc)})

    with_mu = [(n.summary.mixing, h) for n, h in zip(usable, heatmaps)
               if n.summary.mixing is not None]
    try:
        result.regression = mu_regression([m for m, _ in with_mu], [h for _, h in with_mu])
    except StatisticUndefined as exc:
        result.skips.append({"stage": "mu_regression", "reason": str(exc)})


def with_output_dir(spec: ExperimentSpec, path) -> ExperimentSpec:
    return replace(spec, output_dir=Path(path))
