"""Brute-force k-nearest neighbors and image/tag ground truth."""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from ..errors import KTooLargeError
from ..models import Embedding, MultimodalDataset


def _coords(embedding: Embedding | np.ndarray) -> np.ndarray:
    if isinstance(embedding, Embedding):
        return embedding.coords
    coords = np.asarray(embedding, dtype=np.float64)
    return coords.reshape(-1, 1) if coords.ndim == 1 else coords


def ranked_candidates(
    embedding: Embedding | np.ndarray,
    query_row: int,
    candidates: Iterable[int] | None = None,
) -> np.ndarray:
    """Candidate rows (query excluded) sorted by distance, ties by ascending row."""
    coords = _coords(embedding)
    if candidates is None:
        rows = np.arange(coords.shape[0])
    else:
        rows = np.unique(np.fromiter(candidates, dtype=np.int64))
    rows = rows[rows != query_row]
    sq_dists = np.sum((coords[rows] - coords[query_row]) ** 2, axis=1)
    return rows[np.lexsort((rows, sq_dists))]


def knn_indices(
    embedding: Embedding | np.ndarray,
    query_row: int,
    k: int,
    candidates: Iterable[int] | None = None,
) -> list[int]:
    """The k candidate rows closest to the query row."""
    ranked = ranked_candidates(embedding, query_row, candidates)
    if k < 1 or k > ranked.size:
        raise KTooLargeError(k, int(ranked.size))
    return [int(r) for r in ranked[:k]]


def linked_tags(dataset: MultimodalDataset) -> np.ndarray:
    """Boolean n1 x n2 matrix: domain-2 item j is linked to domain-1 item i."""
    return dataset.dense_graph() > 0


def tag_sharing_images(dataset: MultimodalDataset) -> np.ndarray:
    """Boolean n1 x n1 matrix: two distinct domain-1 items share a linked tag."""
    links = linked_tags(dataset).astype(np.int64)
    shared = (links @ links.T) > 0
    np.fill_diagonal(shared, False)
    return shared
