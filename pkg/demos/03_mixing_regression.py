"""
Do the measures agree more when communities blur?
=================================================

Score nodes on planted-partition graphs with growing mixing parameter,
average the pairwise Kendall tau-b between the community-aware measures
(Modularity Vitality excluded), and regress that mean on mu.
"""

import numpy as np

from commspread import centrality as cen
from commspread.community import Partition, mixing_parameter, strength_category
from commspread.pipeline import correlation_heatmap, mean_correlation, mu_regression
from commspread.synthetic import planted_partition

rng = np.random.default_rng(0)
mus, maps = [], []
for target in np.repeat(np.linspace(0.05, 0.5, 10), 3):
    g, comm = planted_partition(400, 8, 8, target, rng)
    p = Partition.from_assignment(g, comm)
    h = correlation_heatmap(cen.compute_all(g, p, skipped={}))
    mus.append(mixing_parameter(g, p))
    maps.append(h)

for mu, h in list(zip(mus, maps))[::3]:
    print(f"mu={mu:.3f} ({strength_category(mu).value:6}) mean tau={mean_correlation(h):.3f}")

r = mu_regression(mus, maps)
print(f"slope={r.slope:.4f} intercept={r.intercept:.4f} p={r.p_value:.3g} r2={r.r_squared:.3f}")

# one heatmap in full
h = maps[-1]
print("      " + " ".join(f"{m.value:>6}" for m in h.measure_ids))
for m, row in zip(h.measure_ids, h.values):
    print(f"{m.value:>6} " + " ".join(f"{v:6.2f}" for v in row))
