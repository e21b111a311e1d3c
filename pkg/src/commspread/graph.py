"""Simple undirected unweighted graphs stored in CSR form."""

from __future__ import annotations

import io
import logging
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_array
from scipy.sparse.csgraph import connected_components

from .errors import DataError, ParseError

log = logging.getLogger(__name__)

COMMENT_PREFIXES = ("#", "%")


@dataclass(frozen=True)
class LoadReport:
    lines: int = 0
    duplicate_edges: int = 0
    self_loops: int = 0
    nodes_outside_lcc: int = 0


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph.

    Nodes are dense indices ``0..N-1``; ``labels[i]`` is the external label of
    node ``i``. Neighbors of ``i`` are ``indices[indptr[i]:indptr[i+1]]``,
    sorted ascending.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple[str, ...]
    report: LoadReport = field(default_factory=LoadReport)

    def __post_init__(self):
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False

    @classmethod
    def from_edges(cls, n, edges, labels=None, report=None):
        """Build a graph on ``n`` nodes from an iterable of ``(u, v)`` pairs.

        Self-loops and duplicate edges are dropped silently; use
        :func:`load_edge_list` when the drop counts matter.
        """
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise DataError(f"edge endpoint outside 0..{n - 1}")
        e = e[e[:, 0] != e[:, 1]]
        e = np.sort(e, axis=1)
        e = np.unique(e, axis=0)
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        if labels is None:
            labels = tuple(str(i) for i in range(n))
        elif len(labels) != n:
            raise DataError("labels length does not match node count")
        return cls(indptr, dst.astype(np.int64), tuple(labels), report or LoadReport())

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def has_edge(self, u, v) -> bool:
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < len(nb) and nb[k] == v)

    def edges(self) -> np.ndarray:
        """``(M, 2)`` array of edges with ``u < v``, lexicographically sorted."""
        src = np.repeat(np.arange(self.node_count), self.degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def index_of(self, label) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise DataError(f"unknown node label {label!r}") from None

    @property
    def _label_index(self) -> dict:
        cache = self.__dict__.get("_label_cache")
        if cache is None:
            cache = {lab: i for i, lab in enumerate(self.labels)}
            object.__setattr__(self, "_label_cache", cache)
        return cache

    def to_sparse(self) -> csr_array:
        n = self.node_count
        data = np.ones(len(self.indices), dtype=np.int64)
        return csr_array((data, self.indices, self.indptr), shape=(n, n))

    def subgraph(self, nodes) -> Graph:
        """Induced subgraph on ``nodes`` (kept in ascending index order)."""
        keep = np.zeros(self.node_count, dtype=bool)
        keep[np.asarray(list(nodes), dtype=np.int64)] = True
        new_id = np.full(self.node_count, -1, dtype=np.int64)
        new_id[keep] = np.arange(keep.sum())
        e = self.edges()
        e = e[keep[e[:, 0]] & keep[e[:, 1]]]
        labels = tuple(lab for lab, k in zip(self.labels, keep) if k)
        return Graph.from_edges(int(keep.sum()), new_id[e], labels, self.report)

    def __repr__(self):
        return f"Graph(N={self.node_count}, M={self.edge_count})"


def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        return open(source, encoding="utf-8"), True
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8")), True
    if isinstance(source, io.TextIOBase):
        return source, False
    return io.TextIOWrapper(source, encoding="utf-8"), False


def read_pairs(source, delimiter=None):
    """Yield ``(line_number, first_token, second_token)`` from a text stream.

    Blank lines and lines starting with ``#`` or ``%`` are skipped. Extra
    tokens (weights, timestamps) are ignored.
    """
    fh, owned = _open_text(source)
    try:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith(COMMENT_PREFIXES):
                continue
            tokens = [t.strip() for t in s.split(delimiter)] if delimiter else s.split()
            if len(tokens) < 2 or not tokens[0] or not tokens[1]:
                raise ParseError(f"expected two endpoint labels, got {s!r}", lineno)
            yield lineno, tokens[0], tokens[1]
    finally:
        if owned:
            fh.close()


def load_edge_list(source, *, delimiter=None, lcc_only=False) -> Graph:
    """Parse an edge list into a :class:`Graph`.

    ``source`` may be a path, raw bytes, or a binary/text stream. Labels are
    mapped to dense indices in first-seen order. Duplicate edges and
    self-loops are dropped and counted in ``graph.report``.
    """
    index = {}
    pairs = []
    lines = 0
    for _, a, b in read_pairs(source, delimiter):
        lines += 1
        u = index.setdefault(a, len(index))
        v = index.setdefault(b, len(index))
        pairs.append((u, v))
    if not index:
        raise DataError("edge list contains no nodes")

    n = len(index)
    e = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    loops = int(np.count_nonzero(e[:, 0] == e[:, 1]))
    e = np.sort(e[e[:, 0] != e[:, 1]], axis=1)
    unique = np.unique(e, axis=0)
    dups = len(e) - len(unique)
    labels = tuple(index)
    report = LoadReport(lines=lines, duplicate_edges=dups, self_loops=loops)
    if dups or loops:
        log.info("dropped %d duplicate edge(s) and %d self-loop(s)", dups, loops)
    g = Graph.from_edges(n, unique, labels, report)
    if lcc_only:
        g = restrict_to_lcc(g)
    return g


def component_labels(g: Graph, removed=None) -> np.ndarray:
    """Component id per node; removed nodes get ``-1``."""
    n = g.node_count
    alive = np.ones(n, dtype=bool)
    if removed is not None and len(removed):
        alive[np.asarray(list(removed), dtype=np.int64)] = False
    e = g.edges()
    e = e[alive[e[:, 0]] & alive[e[:, 1]]]
    adj = csr_array((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
    _, lab = connected_components(adj, directed=False)
    lab = lab.astype(np.int64)
    lab[~alive] = -1
    return lab


def largest_connected_component(g: Graph, removed=()) -> int:
    """Size of the largest component after deleting ``removed`` nodes."""
    lab = component_labels(g, removed)
    lab = lab[lab >= 0]
    if lab.size == 0:
        return 0
    return int(np.bincount(lab).max())


def restrict_to_lcc(g: Graph) -> Graph:
    lab = component_labels(g)
    counts = np.bincount(lab)
    # ties between equal-size components go to the one holding the lowest node index
    biggest = lab[np.flatnonzero(counts[lab] == counts.max())[0]]
    keep = np.flatnonzero(lab == biggest)
    sub = g.subgraph(keep)
    report = LoadReport(g.report.lines, g.report.duplicate_edges, g.report.self_loops,
                        g.node_count - len(keep))
    return Graph(sub.indptr, sub.indices, sub.labels, report)


def mean_degree_moments(g: Graph) -> tuple[float, float]:
    """First and second moments of the degree distribution."""
    k = g.degrees.astype(np.float64)
    return float(k.mean()), float((k * k).mean())
