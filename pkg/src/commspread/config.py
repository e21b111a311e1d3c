"""Experiment configuration files (INI syntax).

Example::

    [experiment]
    measures = all
    fo_grid = 0.01:0.50:0.01
    runs = 100
    seed = 42

    [network eu_airlines]
    graph = data/eu_airlines.txt
    partition = data/eu_airlines.infomap

    [network power_grid]
    graph = data/power.txt
    louvain_seed = 7
    lcc_only = yes

Relative paths are resolved against the config file's directory.
"""

from __future__ import annotations

import configparser
import math
from pathlib import Path

from .centrality import MeasureConfig, parse_measures
from .errors import ConfigError
from .pipeline import ExperimentSpec, NetworkSpec

EXPERIMENT_KEYS = {"measures", "fo_grid", "lcc_fractions", "runs", "gamma", "seed",
                   "lambda_multipliers", "comm_r", "ks_delta", "comm_undefined", "output_dir"}
NETWORK_KEYS = {"graph", "partition", "louvain_seed", "lcc_only", "delimiter"}


def parse_float_list(text) -> tuple[float, ...]:
    """Comma separated floats, or an inclusive ``start:stop:step`` range."""
    text = str(text).strip()
    try:
        if ":" in text:
            start, stop, step = (float(t) for t in text.split(":"))
            if step <= 0:
                raise ConfigError(f"range step must be positive in {text!r}")
            count = math.floor((stop - start) / step + 1e-9) + 1
            return tuple(round(start + i * step, 10) for i in range(max(count, 0)))
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"cannot parse number list {text!r}") from None


def _number(section, key, kind):
    try:
        return kind(section[key])
    except ValueError:
        raise ConfigError(f"[{section.name}] {key}: expected {kind.__name__}, "
                          f"got {section[key]!r}") from None


def load_experiment(path, overrides=None) -> ExperimentSpec:
    path = Path(path)
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    base = path.parent
    return experiment_from_parser(cp, base, overrides or {})


def experiment_from_parser(cp: configparser.ConfigParser, base: Path, overrides) -> ExperimentSpec:
    if not cp.has_section("experiment"):
        raise ConfigError("config has no [experiment] section")
    exp = cp["experiment"]
    unknown = set(exp) - EXPERIMENT_KEYS
    if unknown:
        raise ConfigError(f"[experiment]: unknown key(s) {sorted(unknown)}")

    kw = {}
    if "measures" in exp:
        kw["measures"] = parse_measures(exp["measures"])
    for key in ("fo_grid", "lcc_fractions", "lambda_multipliers"):
        if key in exp:
            kw[key] = parse_float_list(exp[key])
    if "runs" in exp:
        kw["runs"] = _number(exp, "runs", int)
    if "gamma" in exp:
        kw["gamma"] = _number(exp, "gamma", float)
    if "seed" in exp:
        kw["master_seed"] = _number(exp, "seed", int)
    mcfg = {}
    if "comm_r" in exp:
        mcfg["comm_R"] = _number(exp, "comm_r", float)
    if "ks_delta" in exp:
        mcfg["ks_delta"] = _number(exp, "ks_delta", float)
    if "comm_undefined" in exp:
        mcfg["comm_undefined"] = exp["comm_undefined"].strip()
    if "output_dir" in exp:
        kw["output_dir"] = base / exp["output_dir"]

    networks = []
    for name in cp.sections():
        if name == "experiment":
            continue
        kind, _, nid = name.partition(" ")
        if kind != "network" or not nid.strip():
            raise ConfigError(f"unexpected section [{name}]; use [network <id>]")
        sec = cp[name]
        unknown = set(sec) - NETWORK_KEYS
        if unknown:
            raise ConfigError(f"[{name}]: unknown key(s) {sorted(unknown)}")
        if "graph" not in sec:
            raise ConfigError(f"[{name}]: missing 'graph'")
        try:
            lcc_only = sec.getboolean("lcc_only", fallback=False)
        except ValueError:
            raise ConfigError(f"[{name}] lcc_only: expected a boolean") from None
        networks.append(NetworkSpec(
            nid.strip(),
            base / sec["graph"],
            partition_path=base / sec["partition"] if "partition" in sec else None,
            louvain_seed=_number(sec, "louvain_seed", int) if "louvain_seed" in sec else None,
            lcc_only=lcc_only,
            delimiter=sec.get("delimiter") or None,
        ))

    kw.update({k: v for k, v in overrides.items() if v is not None})
    if mcfg:
        kw["measure_config"] = MeasureConfig(**mcfg)
    return ExperimentSpec(networks=tuple(networks), **kw)
