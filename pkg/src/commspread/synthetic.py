"""Planted-partition test graphs with heterogeneous degrees."""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .graph import Graph


def planted_partition(n, communities, mean_degree, mu, rng, degree_exponent=2.5):
    """Random graph with ``communities`` equal groups and a target mixing ``mu``.

    Edge endpoints are drawn proportional to Pareto weights (heavy-tailed
    degrees); the second endpoint is a foreign node with probability ``mu``
    and a same-group node otherwise.  Returns ``(graph, assignment)``.
    """
    if not 0.0 <= mu <= 1.0:
        raise ConfigError("mu must lie in [0, 1]")
    if communities < 2 or n < 2 * communities:
        raise ConfigError("need at least two communities of two nodes")
    target = int(n * mean_degree / 2)
    if target > n * (n - 1) // 4:
        raise ConfigError("mean degree too high for a simple graph")
    rng = np.random.default_rng(rng)
    comm = np.arange(n) % communities
    w = rng.pareto(degree_exponent, n) + 1.0
    cum = np.cumsum(w / w.sum())
    groups = [np.flatnonzero(comm == c) for c in range(communities)]
    group_cum = [np.cumsum(w[g] / w[g].sum()) for g in groups]

    def draw(cdf, size):
        return np.minimum(np.searchsorted(cdf, rng.random(size), side="right"), len(cdf) - 1)

    seen = set()
    edges = []
    while len(edges) < target:
        batch = 2 * (target - len(edges)) + 16
        a = draw(cum, batch)
        external = rng.random(batch) < mu
        b = draw(cum, batch)
        for c in range(communities):
            pick = np.flatnonzero(~external & (comm[a] == c))
            b[pick] = groups[c][draw(group_cum[c], len(pick))]
        ok = (a != b) & ((comm[a] != comm[b]) == external)
        for x, y in zip(a[ok].tolist(), b[ok].tolist()):
            e = (x, y) if x < y else (y, x)
            if e not in seen:
                seen.add(e)
                edges.append(e)
                if len(edges) == target:
                    break
    edges.sort()
    return Graph.from_edges(n, edges), comm
