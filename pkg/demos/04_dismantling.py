"""
Dismantling with static rankings
================================

Delete the top fraction of nodes of each ranking and follow the largest
connected component.  The whole curve comes from one reverse union-find
pass per measure.
"""

from commspread import centrality as cen
from commspread.community import Partition
from commspread.pipeline import lcc_dismantling
from commspread.synthetic import planted_partition

g, comm = planted_partition(800, 10, 5, 0.05, 3)
p = Partition.from_assignment(g, comm)
scores = cen.compute_all(g, p, skipped={})

fractions = [0.0, 0.02, 0.05, 0.1, 0.2, 0.3]
curves = lcc_dismantling(g, scores, fractions)
print(f"{'f':>8}" + "".join(f"{f:>7}" for f in fractions))
for m, curve in curves.items():
    print(f"{m.value:>8}" + "".join(f"{size:7d}" for _, size in curve))

best = min(curves, key=lambda m: sum(size for _, size in curves[m]))
print("smallest area under the curve:", best.value)
