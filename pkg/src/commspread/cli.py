"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 data error
(parse/validation), 3 computation error (undefined measure or statistic).
Diagnostics go to stderr; data goes to files or stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager, nullcontext
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__
from . import centrality as cen
from .community import (
    load_partition,
    louvain_partition,
    mixing_parameter,
    modularity,
    strength_category,
)
from .config import load_experiment, parse_float_list
from .errors import ComputationError, ConfigError, DataError
from .graph import load_edge_list, mean_degree_moments
from .pipeline import lcc_dismantling, run_experiment, sweep_point
from .reports import write_csv, write_experiment, write_scores
from .sir import SirConfig, epidemic_threshold
from .stats import ols_regression

log = logging.getLogger("commspread")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_COMPUTE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _add_graph_args(p, partition=False, required_partition=False):
    p.add_argument("--graph", required=True, type=Path, help="edge list file")
    p.add_argument("--delimiter", default=None, help="field separator (default: whitespace)")
    p.add_argument("--lcc-only", action="store_true",
                   help="keep only the largest connected component")
    if partition:
        grp = p.add_mutually_exclusive_group(required=required_partition)
        grp.add_argument("--partition", type=Path, help="'node community' file")
        grp.add_argument("--louvain", action="store_true",
                         help="detect communities with Louvain seeded by --seed")


def _add_measure_args(p):
    p.add_argument("--measures", default="all", help="'all' or comma separated list")
    p.add_argument("--comm-R", dest="comm_R", type=float, default=1.0)
    p.add_argument("--ks-delta", type=float, default=0.5)
    p.add_argument("--comm-undefined", choices=("skip", "zero-term"), default="skip")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="master random seed (default 0, or the config value)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (1 = sequential; default: all CPUs)")
    common.add_argument("--log-level", default=None,
                        help="DEBUG, INFO, WARNING or ERROR (env COMMSPREAD_LOG)")

    parser = _Parser(prog="commspread", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("load-check", parents=[common],
                       help="load a graph and report its basic statistics")
    _add_graph_args(p, partition=True)
    p.set_defaults(func=cmd_load_check)

    p = sub.add_parser("centrality", parents=[common], help="score nodes")
    _add_graph_args(p, partition=True, required_partition=True)
    _add_measure_args(p)
    p.add_argument("--out", type=Path, default=None, help="output CSV (default stdout)")
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("sir", parents=[common], help="SIR outbreaks seeded from rankings")
    _add_graph_args(p)
    p.add_argument("--seeds-from", required=True, type=Path,
                   help="scores CSV with rank_<measure> columns")
    p.add_argument("--fo", default="0.01:0.50:0.01", help="seed fractions")
    p.add_argument("--runs", type=int, default=100)
    lam = p.add_mutually_exclusive_group()
    lam.add_argument("--lambda", dest="lam", type=float, default=None,
                     help="infection probability (default: epidemic threshold)")
    lam.add_argument("--lambda-multiplier", type=float, default=1.0,
                     help="multiple of the epidemic threshold")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_sir)

    p = sub.add_parser("evaluate", parents=[common], help="run a full experiment")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--out-dir", type=Path, default=None)
    p.add_argument("--runs", type=int, default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("dismantle", parents=[common], help="LCC under targeted removal")
    _add_graph_args(p, partition=True, required_partition=True)
    _add_measure_args(p)
    p.add_argument("--fractions", default="0:0.5:0.01")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_dismantle)

    p = sub.add_parser("regress", parents=[common], help="OLS of one CSV column on another")
    p.add_argument("--data", required=True, type=Path)
    p.add_argument("--x", default="mixing")
    p.add_argument("--y", default="mean_tau")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_regress)
    return parser


def _output(path):
    if path is None:
        return nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="")


def _executor(threads):
    threads = threads or os.cpu_count() or 1
    return ProcessPoolExecutor(max_workers=threads) if threads > 1 else nullcontext(None)


def _load(args):
    with _naming(args.graph):
        g = load_edge_list(args.graph, delimiter=args.delimiter, lcc_only=args.lcc_only)
    r = g.report
    if r.duplicate_edges or r.self_loops:
        log.warning("%s: dropped %d duplicate edge(s), %d self-loop(s)",
                    args.graph, r.duplicate_edges, r.self_loops)
    return g


def _partition(args, g):
    if getattr(args, "partition", None) is not None:
        with _naming(args.partition):
            return load_partition(args.partition, g, delimiter=args.delimiter)
    if getattr(args, "louvain", False):
        seed = args.seed or 0
        p = louvain_partition(g, seed)
        if g.edge_count:
            log.info("louvain seed=%d: %d communities, Q=%.6f", seed,
                     p.community_count, modularity(g, p))
        return p
    return None


@contextmanager
def _naming(path):
    try:
        yield
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from None


def _measure_config(args):
    return cen.MeasureConfig(args.comm_R, args.ks_delta, args.comm_undefined)


def _scores(args, g, p):
    skipped = {}
    scores = cen.compute_all(g, p, cen.parse_measures(args.measures), _measure_config(args),
                             skipped=skipped)
    for m, reason in skipped.items():
        log.warning("skipping %s: %s", m.value, reason)
    if not scores:
        raise ComputationError("no requested measure is defined on this input")
    return scores


def cmd_load_check(args):
    g = _load(args)
    k1, k2 = mean_degree_moments(g)
    info = {
        "graph": str(args.graph),
        "nodes": g.node_count,
        "edges": g.edge_count,
        "mean_degree": k1,
        "second_moment": k2,
        "dropped_duplicates": g.report.duplicate_edges,
        "dropped_self_loops": g.report.self_loops,
        "nodes_outside_lcc": g.report.nodes_outside_lcc,
    }
    try:
        info["epidemic_threshold"] = epidemic_threshold(g)
    except ComputationError as exc:
        log.warning("%s", exc)
        info["epidemic_threshold"] = None
    p = _partition(args, g)
    if p is not None:
        info["communities"] = p.community_count
        if g.edge_count:
            mu = mixing_parameter(g, p)
            info.update(modularity=modularity(g, p), mixing=mu,
                        category=strength_category(mu).value)
    json.dump(info, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def cmd_centrality(args):
    g = _load(args)
    p = _partition(args, g)
    scores = _scores(args, g, p)
    with _output(args.out) as fh:
        write_scores(fh, g, scores)
    return EXIT_OK


def _read_rankings(path, g):
    """``rank_<measure>`` columns of a scores CSV -> node orders."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or "node_label" not in reader.fieldnames:
            raise DataError(f"{path}: missing 'node_label' column")
        cols = [c for c in reader.fieldnames if c.startswith("rank_")]
        if not cols:
            raise DataError(f"{path}: no rank_<measure> columns")
        positions = {c: np.zeros(g.node_count, dtype=np.int64) for c in cols}
        seen = np.zeros(g.node_count, dtype=bool)
        for lineno, row in enumerate(reader, 2):
            try:
                i = g.index_of(row["node_label"])
            except DataError:
                raise DataError(f"{path}: line {lineno}: node {row['node_label']!r} "
                                "is not in the graph") from None
            seen[i] = True
            for c in cols:
                try:
                    positions[c][i] = int(row[c])
                except (TypeError, ValueError):
                    raise DataError(f"{path}: line {lineno}: bad rank in {c!r}") from None
    if not seen.all():
        raise DataError(f"{path}: {int((~seen).sum())} graph node(s) have no rank")
    return {c[len("rank_"):]: np.argsort(positions[c], kind="stable") for c in cols}


def cmd_sir(args):
    g = _load(args)
    rankings = _read_rankings(args.seeds_from, g)
    if args.lam is not None:
        lam = args.lam
    else:
        lam = min(1.0, epidemic_threshold(g) * args.lambda_multiplier)
    cfg = SirConfig(lam, args.gamma, args.runs, args.seed or 0)
    fos = parse_float_list(args.fo)
    keyed = dict(rankings, __baseline__=cen.degree_centrality(g).ranking)
    task = partial(sweep_point, g, keyed, cfg=cfg)
    with _executor(args.threads) as ex:
        results = [task(f) for f in fos] if ex is None else list(ex.map(task, fos))
    rows = []
    for f, res in zip(fos, results):
        rb = res["__baseline__"].mean_recovered
        for name in rankings:
            o = res[name]
            dr = (o.mean_recovered - rb) / rb if rb > 0 else None
            rows.append([name, f, o.seed_set_size, lam, args.gamma, args.runs,
                         o.mean_recovered, o.std_recovered, dr])
    with _output(args.out) as fh:
        write_csv(fh, ["measure", "f_o", "seeds", "lambda", "gamma", "runs",
                       "mean_recovered", "std_recovered", "delta_r_vs_degree"], rows)
    return EXIT_OK


def cmd_evaluate(args):
    overrides = {"master_seed": args.seed, "runs": args.runs, "output_dir": args.out_dir}
    spec = load_experiment(args.config, overrides)
    threads = args.threads or os.cpu_count() or 1
    with _executor(threads) as ex:
        result = run_experiment(spec, ex)
    manifest = write_experiment(result, threads=threads)
    for s in result.skips:
        log.warning("skipped: %s", s)
    log.info("wrote %s", manifest)
    return EXIT_OK


def cmd_dismantle(args):
    g = _load(args)
    p = _partition(args, g)
    scores = _scores(args, g, p)
    curves = lcc_dismantling(g, scores, parse_float_list(args.fractions))
    rows = [[m, f, size] for m, curve in curves.items() for f, size in curve]
    with _output(args.out) as fh:
        write_csv(fh, ["measure", "fraction", "lcc"], rows)
    return EXIT_OK


def cmd_regress(args):
    with open(args.data, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {args.x, args.y} - set(reader.fieldnames or ())
        if missing:
            raise DataError(f"{args.data}: missing column(s) {sorted(missing)}")
        xs, ys = [], []
        for lineno, row in enumerate(reader, 2):
            if row[args.x] in ("", None) or row[args.y] in ("", None):
                continue
            try:
                xs.append(float(row[args.x]))
                ys.append(float(row[args.y]))
            except ValueError:
                raise DataError(f"{args.data}: line {lineno}: non-numeric value") from None
    r = ols_regression(xs, ys)
    with _output(args.out) as fh:
        write_csv(fh, ["slope", "intercept", "p_value", "r_squared", "n"],
                  [[r.slope, r.intercept, r.p_value, r.r_squared, r.n]])
    return EXIT_OK


def _setup_logging(level, env):
    name = (level or env.get("COMMSPREAD_LOG") or "WARNING").upper()
    if not isinstance(logging.getLevelName(name), int):
        raise UsageError(f"unknown log level {name!r}")
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("commspread")
    root.handlers[:] = [handler]
    root.setLevel(name)
    root.propagate = False


def run_cli(argv=None, env=None) -> int:
    env = os.environ if env is None else env
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _setup_logging(args.log_level, env)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, UnicodeDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
