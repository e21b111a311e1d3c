"""CSV / JSON emission.

All CSV files use LF line endings, a header row, ``.`` as decimal separator
and 12 significant digits, so identical results give identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
import platform
import re
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .centrality import Measure
from .pipeline import ExperimentResult, mean_correlation, removal_count


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if v == 0.0:
            return "0"
        return format(v, ".12g")
    if isinstance(value, Measure):
        return value.value
    return str(getattr(value, "value", value))


def write_csv(target, header, rows):
    """Write rows to a path or an open text stream."""
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as fh:
            _write(fh, header, rows)
    else:
        _write(target, header, rows)


def _write(fh, header, rows):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def safe_name(network_id) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", network_id)


def score_rows(g, scores):
    measures = list(scores)
    header = ["node_label"] + [m.value for m in measures] + [f"rank_{m.value}" for m in measures]
    ranks = [scores[m].rank_positions() for m in measures]
    rows = []
    for i, label in enumerate(g.labels):
        rows.append([label] + [scores[m].scores[i] for m in measures] + [r[i] for r in ranks])
    return header, rows


def write_scores(target, g, scores):
    write_csv(target, *score_rows(g, scores))


def write_heatmap(target, h):
    names = [m.value for m in h.measure_ids]
    rows = [[names[a]] + list(h.values[a]) for a in range(len(names))]
    write_csv(target, ["measure"] + names, rows)


def write_delta_r(target, curves):
    rows = [[c.measure, c.lam, p.f_o, p.seeds, p.delta_r, p.mean_r_c, p.mean_r_b, p.std_r_c]
            for c in curves for p in c.points]
    write_csv(target, ["measure", "lambda", "f_o", "seeds", "delta_r", "mean_r_c",
                       "mean_r_b", "std_r_c"], rows)


def write_lcc(target, g, lcc):
    rows = [[m, f, removal_count(f, g.node_count), size]
            for m, curve in lcc.items() for f, size in curve]
    write_csv(target, ["measure", "fraction", "removed", "lcc"], rows)


def write_regression(target, r):
    write_csv(target, ["slope", "intercept", "p_value", "r_squared", "n", "stderr", "t_stat"],
              [[r.slope, r.intercept, r.p_value, r.r_squared, r.n, r.stderr, r.t_stat]])


def network_rows(result: ExperimentResult):
    header = ["network", "nodes", "edges", "mean_degree", "second_moment",
              "epidemic_threshold", "communities", "modularity", "mixing", "category",
              "mean_tau", "partition_source"]
    rows = []
    for net in result.networks:
        s = net.summary
        mean_tau = None
        if net.heatmap is not None:
            h = net.heatmap
            if result.cross_measures and s.network_id in result.cross_ids:
                h = h.restrict(result.cross_measures)
            try:
                mean_tau = mean_correlation(h)
            except ArithmeticError:
                pass
        rows.append([s.network_id, s.nodes, s.edges, s.mean_degree, s.second_moment,
                     s.epidemic_threshold, s.communities, s.modularity, s.mixing,
                     s.category, mean_tau, s.partition_source])
    return header, rows


def write_experiment(result: ExperimentResult, out_dir=None, threads=1) -> Path:
    """Write every report of an experiment and return the manifest path."""
    out = Path(out_dir or result.spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name, writer, *args):
        writer(out / name, *args)
        written.append(name)

    emit("networks.csv", lambda p: write_csv(p, *network_rows(result)))
    for net in result.networks:
        nid = safe_name(net.summary.network_id)
        emit(f"scores_{nid}.csv", write_scores, net.graph, net.scores)
        if net.heatmap is not None:
            emit(f"heatmap_{nid}.csv", write_heatmap, net.heatmap)
        if net.delta_r:
            emit(f"deltaR_{nid}.csv", write_delta_r, net.delta_r)
        emit(f"lcc_{nid}.csv", write_lcc, net.graph, net.lcc)
    if result.cross_pearson is not None:
        ids = list(result.cross_ids)
        rows = [[ids[a]] + list(result.cross_pearson[a]) for a in range(len(ids))]
        emit("cross_network_pearson.csv", lambda p: write_csv(p, ["network"] + ids, rows))
    if result.regression is not None:
        emit("mu_regression.csv", write_regression, result.regression)

    spec = result.spec
    manifest = {
        "package": "commspread",
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "master_seed": spec.master_seed,
        "runs": spec.runs,
        "gamma": spec.gamma,
        "lambda_multipliers": list(spec.lambda_multipliers),
        "measures": [m.value for m in spec.measures],
        "fo_grid": list(spec.fo_grid),
        "lcc_fractions": list(spec.lcc_fractions),
        "measure_config": {"comm_R": spec.measure_config.comm_R,
                           "ks_delta": spec.measure_config.ks_delta,
                           "comm_undefined": spec.measure_config.comm_undefined},
        "networks": [{"id": n.summary.network_id,
                      "graph": str(ns.graph_path),
                      "partition": n.summary.partition_source,
                      "lcc_only": ns.lcc_only,
                      "dropped_duplicates": n.graph.report.duplicate_edges,
                      "dropped_self_loops": n.graph.report.self_loops,
                      "nodes_outside_lcc": n.graph.report.nodes_outside_lcc}
                     for n, ns in zip(result.networks, spec.networks)],
        "skips": result.skips,
        "outputs": written,
        # everything below varies between runs; the data files above do not
        "threads": threads,
        "timings": {"total": result.timings.get("total"),
                    **{n.summary.network_id: n.timings for n in result.networks}},
    }
    path = out / "manifest.json"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, default=str)
        fh.write("\n")
    return path
