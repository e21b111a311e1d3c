"""Community-aware centrality measures and the degree baseline.

Every measure is a pure function of ``(Graph, Partition, MeasureConfig)``
returning a :class:`ScoreVector`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_array

from .community import Partition, modularity
from .errors import ConfigError, MeasureUndefined
from .graph import Graph


class Measure(str, enum.Enum):
    DEGREE = "Degree"
    CHB = "CHB"
    PC = "PC"
    CBM = "CBM"
    COMM = "Comm"
    MV_PLUS = "MVplus"
    MV_MINUS = "MVminus"
    CBC = "CBC"
    KSC = "KSC"

    @classmethod
    def parse(cls, name) -> Measure:
        if isinstance(name, cls):
            return name
        for m in cls:
            if m.value.lower() == str(name).strip().lower():
                return m
        raise ConfigError(f"unknown measure {name!r}; choose from "
                          + ", ".join(m.value for m in cls))


COMMUNITY_AWARE = (Measure.CHB, Measure.PC, Measure.CBM, Measure.COMM,
                   Measure.MV_PLUS, Measure.CBC, Measure.KSC)
# MVminus is available on request but not part of the default set
DEFAULT_MEASURES = (Measure.DEGREE,) + COMMUNITY_AWARE


def parse_measures(spec) -> tuple[Measure, ...]:
    """``"all"`` or a comma separated list of measure names."""
    if isinstance(spec, str):
        if spec.strip().lower() == "all":
            return DEFAULT_MEASURES
        spec = [s for s in spec.split(",") if s.strip()]
    out = []
    for s in spec:
        m = Measure.parse(s)
        if m not in out:
            out.append(m)
    if not out:
        raise ConfigError("no measures selected")
    return tuple(out)


@dataclass(frozen=True)
class MeasureConfig:
    comm_R: float = 1.0
    ks_delta: float = 0.5
    # "skip": raise MeasureUndefined; "zero-term": treat 0/0 ratios as 0
    comm_undefined: str = "skip"

    def __post_init__(self):
        if not self.comm_R > 0:
            raise ConfigError("comm_R must be positive")
        if not 0.0 <= self.ks_delta <= 1.0:
            raise ConfigError("ks_delta must lie in [0, 1]")
        if self.comm_undefined not in ("skip", "zero-term"):
            raise ConfigError("comm_undefined must be 'skip' or 'zero-term'")


@dataclass(frozen=True, eq=False)
class ScoreVector:
    measure: Measure
    scores: np.ndarray

    @property
    def ranking(self) -> np.ndarray:
        """Node indices from most to least central; ties by ascending index."""
        idx = np.arange(len(self.scores))
        if self.measure is Measure.MV_MINUS:
            return np.lexsort((idx, self.scores))
        return np.lexsort((idx, -self.scores))

    def top(self, k) -> np.ndarray:
        return self.ranking[:k]

    def rank_positions(self) -> np.ndarray:
        """1-based rank of every node."""
        pos = np.empty(len(self.scores), dtype=np.int64)
        pos[self.ranking] = np.arange(1, len(self.scores) + 1)
        return pos

    def __len__(self):
        return len(self.scores)


def degree_centrality(g: Graph, p: Partition = None, cfg: MeasureConfig = None) -> ScoreVector:
    return ScoreVector(Measure.DEGREE, g.degrees.astype(np.float64))


def neighbor_community_count(p: Partition) -> np.ndarray:
    """Number of foreign communities each node reaches in one hop."""
    reached = np.diff(p.links.indptr)
    return reached - (p.intra > 0)


def community_hub_bridge(g: Graph, p: Partition, cfg: MeasureConfig = None) -> ScoreVector:
    own_size = p.community_sizes[p.assignment]
    s = own_size * p.intra + neighbor_community_count(p) * p.inter
    return ScoreVector(Measure.CHB, s.astype(np.float64))


def _row_sums(m: csr_array, values) -> np.ndarray:
    n = m.shape[0]
    rows = np.repeat(np.arange(n), np.diff(m.indptr))
    return np.bincount(rows, weights=values, minlength=n)


def participation_coefficient(g: Graph, p: Partition, cfg: MeasureConfig = None) -> ScoreVector:
    k = g.degrees.astype(np.float64)
    sq = _row_sums(p.links, p.links.data.astype(np.float64) ** 2)
    s = np.zeros(g.node_count)
    nz = k > 0
    s[nz] = 1.0 - sq[nz] / k[nz] ** 2
    return ScoreVector(Measure.PC, s)


def _xlogx(x):
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def community_based_mediator(g: Graph, p: Partition, cfg: MeasureConfig = None) -> ScoreVector:
    k = g.degrees.astype(np.float64)
    s = np.zeros(g.node_count)
    nz = k > 0
    if nz.any():
        r_in = p.intra[nz] / k[nz]
        r_out = p.inter[nz] / k[nz]
        entropy = 0.0 - (_xlogx(r_in) + _xlogx(r_out))
        s[nz] = entropy * k[nz] / k.sum()
    return ScoreVector(Measure.CBM, s)


def community_mixing(p: Partition) -> np.ndarray:
    """Per community: inter edges over all edges incident to the community."""
    internal = p.community_internal_edges.astype(np.float64)
    outgoing = p.community_total_degree - 2 * p.community_internal_edges
    incident = internal + outgoing
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(incident > 0, outgoing / np.maximum(incident, 1), 0.0)


def _per_community_max(p: Partition, values):
    out = np.zeros(p.community_count, dtype=values.dtype)
    np.maximum.at(out, p.assignment, values)
    return out


def comm_centrality(g: Graph, p: Partition, cfg: MeasureConfig = None) -> ScoreVector:
    cfg = cfg or MeasureConfig()
    a = p.assignment
    max_in = _per_community_max(p, p.intra)
    max_out = _per_community_max(p, p.inter)
    if cfg.comm_undefined == "skip":
        for label, mx in (("intra", max_in), ("inter", max_out)):
            bad = np.flatnonzero(mx == 0)
            if bad.size:
                q = int(bad[0])
                name = p.labels[q] if p.labels else str(q)
                raise MeasureUndefined(
                    Measure.COMM.value,
                    f"community {name!r} has no {label}-community links"
                    + (f" ({bad.size} such communities)" if bad.size > 1 else ""),
                    community=name)
    with np.errstate(invalid="ignore", divide="ignore"):
        chi = np.where(max_in[a] > 0, p.intra / np.maximum(max_in[a], 1), 0.0) * cfg.comm_R
        phi = np.where(max_out[a] > 0, p.inter / np.maximum(max_out[a], 1), 0.0) * cfg.comm_R
    mu = community_mixing(p)[a]
    return ScoreVector(Measure.COMM, (1 + mu) * chi + (1 - mu) * phi ** 2)


def modularity_after_removal(g: Graph, p: Partition) -> np.ndarray:
    """Modularity of ``G - {i}`` for every node ``i``, from community aggregates.

    Deleting ``i`` (community ``c``) removes ``k_i`` edges, ``k_i,c`` of them
    internal to ``c``; ``d_c`` drops by ``k_i + k_i,c`` and every other
    community ``q`` loses ``k_i,q``. A removal that leaves no edges yields 0.
    """
    n = g.node_count
    m = g.edge_count
    k = g.degrees.astype(np.float64)
    d = p.community_total_degree.astype(np.float64)
    internal_total = float(p.community_internal_edges.sum())
    sq_total = float(np.sum(d * d))

    # delta[i, q] = drop of d_q when i is removed
    rows = np.repeat(np.arange(n), np.diff(p.links.indptr))
    cols = p.links.indices
    vals = p.links.data.astype(np.float64)
    own = cols == p.assignment[rows]
    vals = vals + np.where(own, k[rows], 0.0)
    # nodes without links into their own community still shed k_i from d_c
    lone = np.flatnonzero(p.intra == 0)
    rows = np.concatenate([rows, lone])
    cols = np.concatenate([cols, p.assignment[lone]])
    vals = np.concatenate([vals, k[lone]])

    dq = d[cols]
    change = np.bincount(rows, weights=vals * vals - 2.0 * dq * vals, minlength=n)
    m_after = m - k
    internal_after = internal_total - p.intra
    sq_after = sq_total + change
    q_after = np.zeros(n)
    ok = m_after > 0
    q_after[ok] = internal_after[ok] / m_after[ok] - sq_after[ok] / (4.0 * m_after[ok] ** 2)
    return q_after


def modularity_vitality(g: Graph, p: Partition, cfg: MeasureConfig = None,
                        hubs_first=True) -> ScoreVector:
    """Signed modularity change ``Q(G) - Q(G - {i})``.

    ``hubs_first`` ranks positive (hub-like) values first; otherwise the
    ranking starts from the most negative (bridge-like) values.
    """
    if g.edge_count == 0:
        s = np.zeros(g.node_count)
    else:
        s = modularity(g, p) - modularity_after_removal(g, p)
        s[g.degrees == 0] = 0.0
    return ScoreVector(Measure.MV_PLUS if hubs_first else Measure.MV_MINUS, s)


def community_based_centrality(g: Graph, p: Partition, cfg: MeasureConfig = None) -> ScoreVector:
    frac = p.community_sizes.astype(np.float64) / g.node_count
    s = _row_sums(p.links, p.links.data * frac[p.links.indices])
    return ScoreVector(Measure.CBC, s)


def core_numbers(indptr, indices) -> np.ndarray:
    """k-shell index of every node (Batagelj-Zaversnik bucket algorithm)."""
    n = len(indptr) - 1
    deg = np.diff(indptr).tolist()
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    max_deg = max(deg)
    bins = [0] * (max_deg + 1)
    for dv in deg:
        bins[dv] += 1
    start = 0
    for dv in range(max_deg + 1):
        bins[dv], start = start, start + bins[dv]
    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for dv in range(max_deg, 0, -1):
        bins[dv] = bins[dv - 1]
    bins[0] = 0
    ptr = indptr.tolist()
    nbr = indices.tolist()
    for i in range(n):
        v = vert[i]
        dv = deg[v]
        for u in nbr[ptr[v]:ptr[v + 1]]:
            du = deg[u]
            if du > dv:
                pu = pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u], pos[w] = pw, pu
                    vert[pu], vert[pw] = w, u
                bins[du] += 1
                deg[u] = du - 1
    return np.asarray(deg, dtype=np.int64)


def _split_by_community(g: Graph, p: Partition):
    src = np.repeat(np.arange(g.node_count), g.degrees)
    same = p.assignment[src] == p.assignment[g.indices]
    out = []
    for mask in (same, ~same):
        indptr = np.zeros(g.node_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(src[mask], minlength=g.node_count), out=indptr[1:])
        out.append((indptr, g.indices[mask]))
    return out


def kshell_with_community(g: Graph, p: Partition, cfg: MeasureConfig = None) -> ScoreVector:
    cfg = cfg or MeasureConfig()
    (ip_in, ix_in), (ip_out, ix_out) = _split_by_community(g, p)
    ks_in = core_numbers(ip_in, ix_in)
    ks_out = core_numbers(ip_out, ix_out)
    s = cfg.ks_delta * ks_in + (1.0 - cfg.ks_delta) * ks_out
    return ScoreVector(Measure.KSC, s.astype(np.float64))


def _mv_minus(g, p, cfg=None):
    return modularity_vitality(g, p, cfg, hubs_first=False)


MEASURE_FUNCTIONS = {
    Measure.DEGREE: degree_centrality,
    Measure.CHB: community_hub_bridge,
    Measure.PC: participation_coefficient,
    Measure.CBM: community_based_mediator,
    Measure.COMM: comm_centrality,
    Measure.MV_PLUS: modularity_vitality,
    Measure.MV_MINUS: _mv_minus,
    Measure.CBC: community_based_centrality,
    Measure.KSC: kshell_with_community,
}


def compute(measure, g: Graph, p: Partition, cfg: MeasureConfig = None) -> ScoreVector:
    return MEASURE_FUNCTIONS[Measure.parse(measure)](g, p, cfg or MeasureConfig())


def compute_all(g: Graph, p: Partition, measures=DEFAULT_MEASURES, cfg: MeasureConfig = None,
                skipped=None) -> dict[Measure, ScoreVector]:
    """Score every requested measure.

    Measures that are undefined on this input raise unless ``skipped`` is a
    dict, in which case the error message is stored there and the measure is
    left out of the result.
    """
    cfg = cfg or MeasureConfig()
    out = {}
    for m in parse_measures(measures):
        try:
            out[m] = compute(m, g, p, cfg)
        except MeasureUndefined as exc:
            if skipped is None:
                raise
            skipped[m] = str(exc)
    return out
