"""
Seeding outbreaks from community-aware rankings
===============================================

Each measure picks the top f_o of nodes as initial spreaders.  Every
measure shares the per-run random streams of the degree baseline, so
identical seed sets give identical outbreaks and Delta R is exactly 0.
"""

from commspread import centrality as cen
from commspread.community import Partition, mixing_parameter
from commspread.pipeline import delta_r_sweep
from commspread.sir import SirConfig, epidemic_threshold
from commspread.synthetic import planted_partition

g, comm = planted_partition(600, 8, 6, 0.15, 7)
p = Partition.from_assignment(g, comm)
lam = epidemic_threshold(g)
print(f"N={g.node_count} M={g.edge_count} mu={mixing_parameter(g, p):.3f} lambda_th={lam:.4f}")

scores = cen.compute_all(g, p, skipped={})
grid = [0.01, 0.02, 0.05, 0.1, 0.2]
curves = delta_r_sweep(g, scores, grid, SirConfig(lam, runs=200, master_seed=1))

print(f"{'f_o':>8}" + "".join(f"{f:>8}" for f in grid))
for c in curves:
    print(f"{c.measure.value:>8}" + "".join(
        "      --" if pt.delta_r is None else f"{pt.delta_r:8.3f}" for pt in c.points))

# the degree row is zero by construction, not by luck
assert all(pt.delta_r == 0.0 for pt in curves[0].points)
