"""Linear CDMCA baseline for two domains.

Each positive link (i, j) of the binarized cross graph contributes one
pair (x1_i, x2_j); items with several links are repeated. Regularized CCA
on those pairs gives one projection per domain, and every original item is
projected into the shared space through its domain's projection.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .const import CCA_RANK_TOLERANCE, CCA_REGULARIZATION, DOMAIN_1, DOMAIN_2
from .errors import (
    AllZeroCrossGraphError,
    ConfigError,
    DimensionMismatchError,
    RankDeficientError,
    ShapeMismatchError,
)
from .models import Embedding, MultimodalDataset, validate

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PairedData:
    """Linked feature pairs, one row per positive entry of W in row-major order."""

    a: np.ndarray
    b: np.ndarray
    rows: np.ndarray
    cols: np.ndarray

    @property
    def m(self) -> int:
        return int(self.a.shape[0])


@dataclass(frozen=True, eq=False)
class CcaProjection:
    """Projections (d1 x K, d2 x K), canonical correlations and training means."""

    proj_a: np.ndarray
    proj_b: np.ndarray
    correlations: np.ndarray
    mean_a: np.ndarray
    mean_b: np.ndarray

    def transform_a(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.mean_a) @ self.proj_a

    def transform_b(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.mean_b) @ self.proj_b


def expand_pairs(dataset: MultimodalDataset) -> PairedData:
    """Duplicate data vectors along every link of the binarized cross graph."""
    if dataset.domain2 is None:
        raise DimensionMismatchError("CDMCA needs two domains")
    rows, cols = np.nonzero(dataset.dense_graph() > 0)
    if rows.size == 0:
        raise AllZeroCrossGraphError()
    return PairedData(
        a=dataset.domain1[rows],
        b=dataset.domain2[cols],
        rows=rows,
        cols=cols,
    )


def _inverse_sqrt(cov: np.ndarray, domain: int, lam: float) -> np.ndarray:
    """Symmetric inverse square root of a covariance regularized by lam.

    Its eigenvalues are at least lam, so only lam = 0 can be rank deficient.
    """
    eigvals, eigvecs = scipy.linalg.eigh(cov)
    if lam > 0:
        eigvals = np.maximum(eigvals, lam)
    elif eigvals.min() <= CCA_RANK_TOLERANCE * max(float(eigvals.max()), 0.0):
        raise RankDeficientError(domain)
    return (eigvecs * eigvals**-0.5) @ eigvecs.T


def regularized_cca(
    a: np.ndarray,
    b: np.ndarray,
    dim: int,
    lam: float = CCA_REGULARIZATION,
) -> CcaProjection:
    """Regularized CCA through whitening and an SVD of the whitened cross-covariance.

    Covariances use 1/(m-1) after centering; lam is added to their diagonals.
    Canonical correlations come out nonincreasing, and each direction's sign
    is fixed so its largest-magnitude domain-1 weight is positive.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[0] != b.shape[0]:
        raise ShapeMismatchError(f"paired matrices disagree: {a.shape} vs {b.shape}")
    m, d1 = a.shape
    d2 = b.shape[1]
    if m < 2:
        raise ShapeMismatchError(f"CCA needs at least 2 pairs, got {m}")
    if not 1 <= dim <= min(d1, d2):
        raise ConfigError(f"dim must lie in 1..{min(d1, d2)}, got {dim}")
    if lam < 0:
        raise ConfigError(f"regularization must be nonnegative, got {lam}")

    mean_a = a.mean(axis=0)
    mean_b = b.mean(axis=0)
    ca = a - mean_a
    cb = b - mean_b
    cov_aa = ca.T @ ca / (m - 1) + lam * np.eye(d1)
    cov_bb = cb.T @ cb / (m - 1) + lam * np.eye(d2)
    cov_ab = ca.T @ cb / (m - 1)

    white_a = _inverse_sqrt(cov_aa, DOMAIN_1, lam)
    white_b = _inverse_sqrt(cov_bb, DOMAIN_2, lam)
    u, s, vt = scipy.linalg.svd(white_a @ cov_ab @ white_b, full_matrices=False)
    u = u[:, :dim]
    v = vt.T[:, :dim]

    signs = np.sign(u[np.argmax(np.abs(u), axis=0), np.arange(dim)])
    signs[signs == 0] = 1.0
    u = u * signs
    v = v * signs

    correlations = np.clip(s[:dim], 0.0, 1.0)
    _LOGGER.debug("Canonical correlations: %s", correlations)
    return CcaProjection(
        proj_a=white_a @ u,
        proj_b=white_b @ v,
        correlations=correlations,
        mean_a=mean_a,
        mean_b=mean_b,
    )


def cdmca_embed(
    dataset: MultimodalDataset,
    dim: int,
    lam: float = CCA_REGULARIZATION,
) -> Embedding:
    """Project every item of both domains into the shared dim-space learned by CDMCA."""
    validate(dataset)
    pairs = expand_pairs(dataset)
    projection = regularized_cca(pairs.a, pairs.b, dim, lam)
    assert dataset.domain2 is not None
    coords = np.vstack([projection.transform_a(dataset.domain1), projection.transform_b(dataset.domain2)])
    _LOGGER.info(
        "CDMCA on %d linked pairs, top canonical correlation %.4f",
        pairs.m,
        float(projection.correlations[0]),
    )
    return Embedding(coords=coords, n1=dataset.n1, n2=dataset.n2)
