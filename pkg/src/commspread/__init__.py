"""Community-aware centrality measures and their evaluation by SIR spreading."""

__version__ = "0.1.0"

from .centrality import (  # noqa: E402
    DEFAULT_MEASURES,
    Measure,
    MeasureConfig,
    ScoreVector,
    compute,
    compute_all,
)
from .community import (  # noqa: E402
    Partition,
    StrengthCategory,
    load_partition,
    louvain_partition,
    mixing_parameter,
    modularity,
    strength_category,
)
from .graph import Graph, largest_connected_component, load_edge_list, mean_degree_moments  # noqa: E402
from .sir import SirConfig, SirOutcome, epidemic_threshold, run_sir, select_seed_set  # noqa: E402
from .stats import kendall_tau_b, ols_regression, pearson  # noqa: E402
from .synthetic import planted_partition  # noqa: E402

__all__ = [
    "DEFAULT_MEASURES", "Graph", "Measure", "MeasureConfig", "Partition", "ScoreVector",
    "SirConfig", "SirOutcome", "StrengthCategory", "compute", "compute_all",
    "epidemic_threshold", "kendall_tau_b", "largest_connected_component", "load_edge_list",
    "load_partition", "louvain_partition", "mean_degree_moments", "mixing_parameter",
    "modularity", "ols_regression", "pearson", "planted_partition", "run_sir",
    "select_seed_set", "strength_category",
]
