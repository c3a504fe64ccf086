"""Spread of each domain in the shared space."""

from __future__ import annotations

import numpy as np

from ..const import DOMAIN_1, DOMAIN_2
from ..errors import DegenerateDomainError, EmptyDomainError
from ..models import Embedding


def _covariance_trace(coords: np.ndarray) -> float:
    # trace of the unbiased covariance = sum of per-axis variances
    return float(np.var(coords, axis=0, ddof=1).sum())


def variance_ratio(embedding: Embedding) -> float:
    """tr(cov of domain 1) / tr(cov of domain 2); near 1 when neither domain collapsed."""
    for domain, n in ((DOMAIN_1, embedding.n1), (DOMAIN_2, embedding.n2)):
        if n < 2:
            raise EmptyDomainError(domain, n, 2)
    trace1 = _covariance_trace(embedding.domain1_coords)
    trace2 = _covariance_trace(embedding.domain2_coords)
    if trace1 == 0:
        raise DegenerateDomainError(DOMAIN_1)
    if trace2 == 0:
        raise DegenerateDomainError(DOMAIN_2)
    return trace1 / trace2
