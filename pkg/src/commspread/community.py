"""Partitions, modularity, mixing parameter and a Louvain fallback."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_array

from .errors import ComputationError, ConfigError, DataError
from .graph import Graph, read_pairs

log = logging.getLogger(__name__)

STRONG_MAX_MU = 0.084
WEAK_MIN_MU = 0.410


@dataclass(frozen=True, eq=False)
class Partition:
    """Hard assignment of every node to one community, with aggregates.

    ``links`` is an ``N x C`` sparse matrix whose entry ``(i, q)`` counts the
    edges between node ``i`` and members of community ``q``.
    """

    assignment: np.ndarray
    community_count: int
    community_sizes: np.ndarray
    community_total_degree: np.ndarray
    community_internal_edges: np.ndarray
    intra: np.ndarray
    inter: np.ndarray
    links: csr_array
    labels: tuple[str, ...] = ()

    @classmethod
    def from_assignment(cls, g: Graph, assignment, labels=None) -> Partition:
        """Build a partition from one community key per node.

        Keys may be any hashable values; they are renumbered ``0..C-1`` in order
        of first appearance along node index.
        """
        keys = list(assignment)
        if len(keys) != g.node_count:
            raise DataError(f"assignment has {len(keys)} entries for {g.node_count} nodes")
        if not keys:
            raise DataError("partition has no communities")
        dense = {}
        a = np.fromiter((dense.setdefault(k, len(dense)) for k in keys),
                        dtype=np.int64, count=len(keys))
        if labels is None:
            labels = tuple(str(k) for k in dense)
        c = len(dense)
        n = g.node_count
        onehot = csr_array((np.ones(n, dtype=np.int64), (np.arange(n), a)), shape=(n, c))
        links = csr_array(g.to_sparse() @ onehot)
        links.sort_indices()
        deg = g.degrees
        intra = np.asarray(links[np.arange(n), a]).ravel().astype(np.int64)
        sizes = np.bincount(a, minlength=c)
        total = np.bincount(a, weights=deg, minlength=c).astype(np.int64)
        internal = np.bincount(a, weights=intra, minlength=c).astype(np.int64) // 2
        return cls(a, c, sizes, total, internal, intra, deg - intra, links, tuple(labels))

    def members(self, q) -> np.ndarray:
        return np.flatnonzero(self.assignment == q)

    def links_of(self, i) -> dict[int, int]:
        """Community -> link count for node ``i`` (nonzero entries only)."""
        lo, hi = self.links.indptr[i], self.links.indptr[i + 1]
        return dict(zip(self.links.indices[lo:hi].tolist(), self.links.data[lo:hi].tolist()))

    @property
    def inter_edge_count(self) -> int:
        return int(self.inter.sum()) // 2

    def __repr__(self):
        return f"Partition(C={self.community_count})"


def load_partition(source, g: Graph, delimiter=None) -> Partition:
    """Read ``node_label community_label`` lines into a partition of ``g``."""
    comm = [None] * g.node_count
    for lineno, node, label in read_pairs(source, delimiter):
        try:
            i = g.index_of(node)
        except DataError:
            raise DataError(f"line {lineno}: node {node!r} is not in the graph") from None
        if comm[i] is not None and comm[i] != label:
            raise DataError(f"line {lineno}: node {node!r} assigned to both "
                            f"{comm[i]!r} and {label!r}")
        comm[i] = label
    if all(c is None for c in comm):
        raise DataError("partition file assigns no nodes")
    missing = [g.labels[i] for i, c in enumerate(comm) if c is None]
    if missing:
        shown = ", ".join(repr(m) for m in missing[:5])
        more = f" (+{len(missing) - 5} more)" if len(missing) > 5 else ""
        raise DataError(f"unassigned node(s): {shown}{more}")
    return Partition.from_assignment(g, comm)


def modularity(g: Graph, p: Partition) -> float:
    """Newman modularity: sum over communities of ``l/M - (d/2M)^2``."""
    m = g.edge_count
    if m == 0:
        raise ComputationError("modularity is undefined for a graph without edges")
    l = p.community_internal_edges.astype(np.float64)
    d = p.community_total_degree.astype(np.float64)
    return float(l.sum() / m - np.sum((d / (2.0 * m)) ** 2))


def mixing_parameter(g: Graph, p: Partition) -> float:
    """Fraction of edge endpoints that leave their community."""
    if g.edge_count == 0:
        raise ComputationError("mixing parameter is undefined for a graph without edges")
    return float(p.inter.sum() / g.degrees.sum())


class StrengthCategory(str, enum.Enum):
    STRONG = "Strong"
    MEDIUM = "Medium"
    WEAK = "Weak"


def strength_category(mu, strong_max=STRONG_MAX_MU, weak_min=WEAK_MIN_MU) -> StrengthCategory:
    """Classify community structure strength from the mixing parameter.

    Values between the two cut points (including the unlabelled band just
    below ``weak_min``) are Medium.
    """
    if not strong_max < weak_min:
        raise ConfigError(f"strength thresholds out of order: {strong_max} >= {weak_min}")
    if not 0.0 <= mu <= 1.0:
        raise ConfigError(f"mixing parameter {mu} outside [0, 1]")
    if mu <= strong_max:
        return StrengthCategory.STRONG
    if mu >= weak_min:
        return StrengthCategory.WEAK
    return StrengthCategory.MEDIUM


# -- Louvain ---------------------------------------------------------------

_GAIN_EPS = 1e-12


def _local_moving(w: csr_array, strength, two_m, rng):
    """One Louvain level on weighted graph ``w``; returns (community, moved)."""
    n = w.shape[0]
    comm = np.arange(n)
    tot = strength.astype(np.float64).copy()
    indptr, indices, data = w.indptr, w.indices, w.data
    order = rng.permutation(n)
    any_move = False
    improved = True
    while improved:
        improved = False
        for i in order:
            ki = strength[i]
            ci = comm[i]
            weights = {}
            for j, wij in zip(indices[indptr[i]:indptr[i + 1]], data[indptr[i]:indptr[i + 1]]):
                if j != i:
                    cj = comm[j]
                    weights[cj] = weights.get(cj, 0.0) + wij
            tot[ci] -= ki
            stay = weights.get(ci, 0.0) - tot[ci] * ki / two_m
            best_gain, best = stay, ci
            for c in sorted(weights):
                gain = weights[c] - tot[c] * ki / two_m
                if gain > best_gain + _GAIN_EPS:
                    best_gain, best = gain, c
            tot[best] += ki
            if best != ci:
                comm[i] = best
                improved = any_move = True
    return comm, any_move


def _renumber(comm):
    uniq, first = np.unique(comm, return_index=True)
    remap = np.empty(comm.max() + 1, dtype=np.int64)
    remap[uniq[np.argsort(first)]] = np.arange(len(uniq))
    return remap[comm]


def louvain_partition(g: Graph, seed: int = 0) -> Partition:
    """Greedy modularity optimisation (Louvain), deterministic given ``seed``.

    Node visit order at every level is a seeded shuffle; among moves with
    equal gain the lowest community id wins, and a node only leaves its
    community for a strictly better one.
    """
    n = g.node_count
    if n == 0:
        raise DataError("empty graph")
    if g.edge_count == 0:
        return Partition.from_assignment(g, range(n))
    rng = np.random.default_rng(seed)
    w = csr_array(g.to_sparse().astype(np.float64))
    two_m = float(w.sum())
    node_comm = np.arange(n)
    while True:
        strength = np.asarray(w.sum(axis=1)).ravel()
        comm, moved = _local_moving(w, strength, two_m, rng)
        if not moved:
            break
        comm = _renumber(comm)
        node_comm = comm[node_comm]
        k = comm.max() + 1
        h = csr_array((np.ones(len(comm)), (np.arange(len(comm)), comm)), shape=(len(comm), k))
        w = csr_array(h.T @ w @ h)
        w.sort_indices()
        if k == 1:
            break
    p = Partition.from_assignment(g, node_comm)
    log.debug("louvain seed=%d: C=%d Q=%.6f", seed, p.community_count, modularity(g, p))
    return p
