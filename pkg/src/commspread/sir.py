"""Discrete-time SIR simulation with multiple initial spreaders.

Dynamics per step: every infectious node tries each susceptible neighbour
once with probability ``lam``; then each node that was infectious at the
start of the step recovers with probability ``gamma``. Nodes infected during
a step become infectious at the next one.

Run ``r`` draws from a generator seeded by ``SeedSequence(master_seed,
spawn_key=(r,))``, so results do not depend on how runs are scheduled, and
two seed sets simulated with the same config see the same streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SimulationError, ThresholdUndefined
from .graph import Graph, mean_degree_moments

# guards floor(f * N) against representation error, e.g. 0.29 * 100
_FLOOR_EPS = 1e-9


@dataclass(frozen=True)
class SirConfig:
    lam: float
    gamma: float = 1.0
    runs: int = 100
    master_seed: int = 0
    max_steps: int = 10**6

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ConfigError(f"infection probability {self.lam} outside [0, 1]")
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigError(f"recovery probability {self.gamma} outside (0, 1]")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be non-negative")


@dataclass(frozen=True)
class SirOutcome:
    mean_recovered: float
    std_recovered: float
    per_run_recovered: tuple[int, ...]
    seed_set_size: int

    @property
    def stderr(self) -> float:
        return self.std_recovered / math.sqrt(len(self.per_run_recovered))


def epidemic_threshold(g: Graph) -> float:
    """``<k> / (<k^2> - <k>)``."""
    k1, k2 = mean_degree_moments(g)
    if k2 <= k1:
        raise ThresholdUndefined(
            f"epidemic threshold undefined: <k^2>={k2:g} <= <k>={k1:g}")
    return k1 / (k2 - k1)


def seed_count(f_o, n) -> int:
    if not 0.0 < f_o <= 1.0:
        raise ConfigError(f"seed fraction {f_o} outside (0, 1]")
    return max(1, min(n, math.floor(f_o * n + _FLOOR_EPS)))


def select_seed_set(ranking, f_o, g: Graph) -> np.ndarray:
    """Top ``max(1, floor(f_o * N))`` nodes of a ranking (ScoreVector or index array)."""
    order = getattr(ranking, "ranking", ranking)
    return np.asarray(order[:seed_count(f_o, g.node_count)], dtype=np.int64)


def run_stream(master_seed, run) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(run,)))


def _gather_neighbors(indptr, indices, nodes):
    starts = indptr[nodes]
    counts = indptr[nodes + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return indices[:0]
    shift = np.repeat(starts - (np.cumsum(counts) - counts), counts)
    return indices[np.arange(total) + shift]


def simulate_once(g: Graph, seeds, lam, gamma, rng, max_steps=10**6, trace=None) -> int:
    """One SIR realisation; returns the number of recovered nodes.

    If ``trace`` is a list, the state vector (0=S, 1=I, 2=R) after every step
    is appended to it.
    """
    state = np.zeros(g.node_count, dtype=np.int8)
    infected = np.unique(np.asarray(seeds, dtype=np.int64))
    state[infected] = 1
    if trace is not None:
        trace.append(state.copy())
    steps = 0
    while infected.size:
        steps += 1
        if steps > max_steps:
            raise SimulationError(f"SIR run exceeded {max_steps} steps")
        nbr = _gather_neighbors(g.indptr, g.indices, infected)
        targets = nbr[state[nbr] == 0]
        if lam >= 1.0:
            new = np.unique(targets)
        elif lam > 0.0 and targets.size:
            new = np.unique(targets[rng.random(targets.size) < lam])
        else:
            new = targets[:0]
        if gamma >= 1.0:
            recovering = infected
            staying = infected[:0]
        else:
            rec = rng.random(infected.size) < gamma
            recovering, staying = infected[rec], infected[~rec]
        state[recovering] = 2
        state[new] = 1
        infected = np.union1d(staying, new)
        if trace is not None:
            trace.append(state.copy())
    return int(np.count_nonzero(state == 2))


def run_sir(g: Graph, seeds, cfg: SirConfig) -> SirOutcome:
    """Repeat the simulation ``cfg.runs`` times from the same seed set."""
    seeds = np.unique(np.asarray(seeds, dtype=np.int64))
    if seeds.size == 0:
        raise ConfigError("seed set is empty")
    per_run = tuple(
        simulate_once(g, seeds, cfg.lam, cfg.gamma, run_stream(cfg.master_seed, r), cfg.max_steps)
        for r in range(cfg.runs)
    )
    arr = np.asarray(per_run, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return SirOutcome(float(arr.mean()), std, per_run, int(seeds.size))
