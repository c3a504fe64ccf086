"""Graph-reconstruction ROC over the neighborhood size k.

For each domain-1 query the k nearest rows (both domains, query excluded)
are predicted as linked, for k = 1 .. n1 + n2 - 1. Positives are the
query's linked tags and every image sharing a tag with it. Counts are
pooled over queries at each k before the trapezoidal AUC.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn import metrics

from ..errors import EvaluationError, NoPositivesError
from ..models import Embedding, MultimodalDataset
from ..workers import map_rows
from .neighbors import linked_tags, ranked_candidates, tag_sharing_images

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RocCurve:
    """ROC points indexed by k; k=0 is (0, 0) and the last k is (1, 1)."""

    ks: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float

    @property
    def points(self) -> list[tuple[float, float]]:
        return [(float(f), float(t)) for f, t in zip(self.fpr, self.tpr, strict=True)]


def roc_from_hits(hits: list[np.ndarray]) -> RocCurve:
    """Pool ranked hit vectors (one per query, equal lengths) into an ROC curve.

    hits[q][r] is True when the r-th ranked candidate of query q is a positive.
    """
    if not hits:
        raise NoPositivesError("no query with a positive to evaluate")
    n_candidates = hits[0].size
    retrieved_pos = np.zeros(n_candidates + 1, dtype=np.int64)
    total_pos = 0
    for hit in hits:
        retrieved_pos[1:] += np.cumsum(hit, dtype=np.int64)
        total_pos += int(hit.sum())
    ks = np.arange(n_candidates + 1)
    retrieved_neg = ks * len(hits) - retrieved_pos
    total_neg = n_candidates * len(hits) - total_pos
    if total_pos == 0:
        raise NoPositivesError("no query with a positive to evaluate")
    if total_neg == 0:
        raise EvaluationError("every candidate is a positive; the false-positive rate is undefined")

    tpr = retrieved_pos / total_pos
    fpr = retrieved_neg / total_neg
    return RocCurve(ks=ks, fpr=fpr, tpr=tpr, auc=float(metrics.auc(fpr, tpr)))


def reconstruction_roc(embedding: Embedding, dataset: MultimodalDataset, threads: int = 0) -> RocCurve:
    """ROC of recovering each image's linked tags and tag-sharing images from k-NN."""
    if embedding.n1 != dataset.n1 or embedding.n2 != dataset.n2:
        raise EvaluationError(
            f"embedding rows ({embedding.n1}+{embedding.n2}) do not match the dataset ({dataset.n1}+{dataset.n2})"
        )
    positives = np.hstack([tag_sharing_images(dataset), linked_tags(dataset)])

    def _query_hits(i: int) -> np.ndarray:
        return positives[i, ranked_candidates(embedding, i)]

    queries = [i for i in range(dataset.n1) if positives[i].any()]
    skipped = dataset.n1 - len(queries)
    if skipped:
        _LOGGER.warning("%d of %d queries have no positives and are excluded from the ROC", skipped, dataset.n1)
    if not queries:
        raise NoPositivesError("no domain-1 item has a linked tag")

    curve = roc_from_hits(map_rows(_query_hits, queries, threads))
    _LOGGER.info("Reconstruction ROC-AUC over %d queries: %.4f", len(queries), curve.auc)
    return curve


def export_roc(curve: RocCurve, path: str | Path) -> None:
    """Write `k fpr tpr` lines for plotting, after a header line."""
    lines = ["k fpr tpr"]
    lines.extend(
        f"{int(k)} {float(f)!r} {float(t)!r}" for k, f, t in zip(curve.ks, curve.fpr, curve.tpr, strict=True)
    )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
