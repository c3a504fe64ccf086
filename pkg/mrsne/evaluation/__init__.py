"""Evaluation of embeddings: graph reconstruction, neighborhood hits, variance ratio."""

from .neighborhood import MetricKind, MetricScope, candidate_count, knn_metric, metric_sweep
from .neighbors import knn_indices, linked_tags, ranked_candidates, tag_sharing_images
from .reconstruction import RocCurve, export_roc, reconstruction_roc, roc_from_hits
from .variance import variance_ratio

__all__ = [
    "MetricKind",
    "MetricScope",
    "RocCurve",
    "candidate_count",
    "export_roc",
    "knn_indices",
    "knn_metric",
    "linked_tags",
    "metric_sweep",
    "ranked_candidates",
    "reconstruction_roc",
    "roc_from_hits",
    "tag_sharing_images",
    "variance_ratio",
]
