"""High-dimensional affinities: stochastic neighbor graphs and the augmented relation."""

from .relation import (
    AugmentedRelation,
    CrossRelation,
    adaptive_betas,
    assemble_augmented,
    normalize_cross_graph,
    single_domain_relation,
)
from .sn_graph import (
    SnGraph,
    build_sn_graph,
    calibrate_bandwidth,
    conditional_row,
    squared_distance_matrix,
)

__all__ = [
    "AugmentedRelation",
    "CrossRelation",
    "SnGraph",
    "adaptive_betas",
    "assemble_augmented",
    "build_sn_graph",
    "calibrate_bandwidth",
    "conditional_row",
    "normalize_cross_graph",
    "single_domain_relation",
    "squared_distance_matrix",
]
