"""Pinning-set selectors."""
from .centrality import (MEASURES, RANKERS, CentralityRanking, betweenness, coreness, cycle_ratio,
                         rank_betweenness, rank_coreness, rank_cycle_ratio, rank_degree, top_k_set)
from .exhaustive import ENUMERATION_CAP, exhaustive_annealed, exhaustive_curve, select_exhaustive
from .greedy import select_bfg_curve
from .output import StrategyOutput, StrategyRecord
from .threshold import (a1_curve, a1_index, a2_candidates, select_a1, select_a2_curve,
                        threshold_free_counts, threshold_lambda)

__all__ = [
    "CentralityRanking", "ENUMERATION_CAP", "MEASURES", "RANKERS", "StrategyOutput", "StrategyRecord",
    "a1_curve", "a1_index", "a2_candidates", "betweenness", "coreness", "cycle_ratio",
    "exhaustive_annealed", "exhaustive_curve", "rank_betweenness", "rank_coreness", "rank_cycle_ratio", "rank_degree",
    "select_a1", "select_a2_curve", "select_bfg_curve", "select_exhaustive", "threshold_free_counts",
    "threshold_lambda", "top_k_set",
]
