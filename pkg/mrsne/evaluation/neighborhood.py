"""k-NN hit metrics per domain-1 query.

Metric I is the fraction of queries with at least one positive among
their k nearest candidates; metric II is the mean number of positives
found. Candidates are all domain-2 items (across) or the other domain-1
items (within_image). Queries without positives count as zero.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)

import numpy as np

from ..const import DEFAULT_METRIC_KS
from ..errors import KTooLargeError
from ..models import Embedding, MultimodalDataset
from ..workers import map_rows
from .neighbors import knn_indices, linked_tags, tag_sharing_images

_LOGGER = logging.getLogger(__name__)


class MetricKind(StrEnum):
    """Hit indicator (I) or hit count (II)."""

    I = "I"  # noqa: E741
    II = "II"


class MetricScope(StrEnum):
    """Candidate set searched for neighbors."""

    ACROSS = "across"
    WITHIN_IMAGE = "within_image"


def _scope_setup(
    embedding: Embedding, dataset: MultimodalDataset, scope: MetricScope
) -> tuple[np.ndarray, np.ndarray, int]:
    """Candidate rows, per-query positive mask over all rows, and candidate count."""
    n_rows = embedding.n_rows
    positives = np.zeros((dataset.n1, n_rows), dtype=bool)
    if scope is MetricScope.ACROSS:
        candidates = np.arange(embedding.n1, n_rows)
        positives[:, embedding.n1 :] = linked_tags(dataset)
        available = candidates.size
    else:
        candidates = np.arange(embedding.n1)
        positives[:, : embedding.n1] = tag_sharing_images(dataset)
        available = candidates.size - 1
    return candidates, positives, available


def candidate_count(embedding: Embedding, scope: MetricScope | str) -> int:
    """Largest valid k for a scope."""
    if MetricScope(scope) is MetricScope.ACROSS:
        return embedding.n2
    return embedding.n1 - 1


def knn_metric(
    embedding: Embedding,
    dataset: MultimodalDataset,
    k: int,
    kind: MetricKind | str,
    scope: MetricScope | str,
    threads: int = 0,
) -> float:
    """Metric I or II at neighborhood size k, averaged over every domain-1 query."""
    kind = MetricKind(kind)
    scope = MetricScope(scope)
    candidates, positives, available = _scope_setup(embedding, dataset, scope)
    if k < 1 or k > available:
        raise KTooLargeError(k, available)

    def _hits(i: int) -> int:
        neighbors = knn_indices(embedding, i, k, candidates)
        return int(positives[i, neighbors].sum())

    hits = np.asarray(map_rows(_hits, range(dataset.n1), threads), dtype=np.float64)
    if kind is MetricKind.I:
        return float(np.mean(hits > 0))
    return float(np.mean(hits))


def metric_sweep(
    embedding: Embedding,
    dataset: MultimodalDataset,
    ks: Sequence[int] = DEFAULT_METRIC_KS,
    kinds: Iterable[MetricKind | str] = (MetricKind.I, MetricKind.II),
    scopes: Iterable[MetricScope | str] = (MetricScope.ACROSS, MetricScope.WITHIN_IMAGE),
    threads: int = 0,
) -> dict[tuple[MetricKind, MetricScope], dict[int, float]]:
    """Evaluate every kind/scope pair at each k that fits the candidate range."""
    results: dict[tuple[MetricKind, MetricScope], dict[int, float]] = {}
    kinds = [MetricKind(k) for k in kinds]
    for scope in (MetricScope(s) for s in scopes):
        limit = candidate_count(embedding, scope)
        usable = [k for k in ks if 1 <= k <= limit]
        if len(usable) < len(ks):
            _LOGGER.debug("Scope %s: skipping k values above %d", scope, limit)
        for kind in kinds:
            results[(kind, scope)] = {
                k: knn_metric(embedding, dataset, k, kind, scope, threads) for k in usable
            }
    return results
