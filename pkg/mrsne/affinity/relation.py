"""Across-domain relation and the augmented joint-probability matrix."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..const import DOMAIN_1, DOMAIN_2
from ..errors import (
    AllZeroCrossGraphError,
    DimensionMismatchError,
    MissingGraphWithPositiveBetaError,
    NegativeWeightError,
)
from ..models import BetaWeights, NormMode
from .sn_graph import SnGraph

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CrossRelation:
    """Cross-domain graph normalized to unit total mass."""

    r: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.r.shape[0]), int(self.r.shape[1]))


@dataclass(frozen=True, eq=False)
class AugmentedRelation:
    """Block matrix [b1 P1, b12/2 R; b12/2 R^T, b2 P2] over all n1 + n2 items."""

    p_tilde: np.ndarray
    n1: int
    n2: int

    @property
    def size(self) -> int:
        return self.n1 + self.n2


def _inverse_or_zero(values: np.ndarray) -> np.ndarray:
    """1/x where x > 0, else 0 (isolated items get no cross-domain mass)."""
    out = np.zeros_like(values)
    np.divide(1.0, values, out=out, where=values > 0)
    return out


def normalize_cross_graph(w: sp.spmatrix | np.ndarray, mode: NormMode | str = NormMode.UNNORM) -> CrossRelation:
    """Apply the preprocessing mode to W, then scale it to unit total mass.

    norm: w_ij / (sqrt(row_i) sqrt(col_j)); pmi: w_ij / (row_i col_j), with
    row_i and col_j the full row and column sums of W.
    """
    mode = NormMode(mode)
    dense = w.toarray() if sp.issparse(w) else np.array(w, dtype=np.float64)
    dense = np.asarray(dense, dtype=np.float64)
    if dense.ndim != 2:
        raise DimensionMismatchError(f"cross graph must be a matrix, got {dense.ndim} dimensions")
    negative = np.argwhere(dense < 0)
    if negative.size:
        raise NegativeWeightError(int(negative[0][0]), int(negative[0][1]))
    if not dense.sum() > 0:
        raise AllZeroCrossGraphError()

    if mode is NormMode.UNNORM:
        transformed = dense
    else:
        row_sums = dense.sum(axis=1)
        col_sums = dense.sum(axis=0)
        if mode is NormMode.NORM:
            row_sums = np.sqrt(row_sums)
            col_sums = np.sqrt(col_sums)
        transformed = dense * np.outer(_inverse_or_zero(row_sums), _inverse_or_zero(col_sums))

    r = transformed / transformed.sum()
    _LOGGER.debug("Normalized %dx%d cross graph (mode=%s)", r.shape[0], r.shape[1], mode)
    return CrossRelation(r=r)


def adaptive_betas(n1: int, n2: int, drop_domain2: bool = False) -> BetaWeights:
    """Block weights proportional to block sizes n1^2, n2^2 and n1 n2.

    With drop_domain2 the domain-2 block is removed: b1 = n1^2 / (n1^2 + n1 n2).
    """
    if n1 < 1 or n2 < 1:
        raise ValueError(f"domain sizes must be positive, got {n1}, {n2}")
    if drop_domain2:
        denom = n1 * n1 + n1 * n2
        return BetaWeights(n1 * n1 / denom, 0.0, n1 * n2 / denom)
    denom = n1 * n1 + n2 * n2 + n1 * n2
    return BetaWeights(n1 * n1 / denom, n2 * n2 / denom, n1 * n2 / denom)


def _block(graph: SnGraph | None, beta: float, n: int, domain: int) -> np.ndarray:
    if graph is None:
        if beta > 0:
            raise MissingGraphWithPositiveBetaError(domain, beta)
        return np.zeros((n, n))
    if graph.n != n:
        raise DimensionMismatchError(f"domain {domain} graph has {graph.n} points, relation expects {n}")
    return beta * graph.probs


def assemble_augmented(
    p1: SnGraph | None,
    p2: SnGraph | None,
    r: CrossRelation,
    betas: BetaWeights,
) -> AugmentedRelation:
    """Assemble P~ from the two domain graphs and the cross relation."""
    n1, n2 = r.shape
    cross = 0.5 * betas.beta12 * r.r
    p_tilde = np.block([
        [_block(p1, betas.beta1, n1, DOMAIN_1), cross],
        [cross.T, _block(p2, betas.beta2, n2, DOMAIN_2)],
    ])
    return AugmentedRelation(p_tilde=p_tilde, n1=n1, n2=n2)


def single_domain_relation(p1: SnGraph) -> AugmentedRelation:
    """P~ for one domain alone (beta = (1, 0, 0)); the objective reduces to t-SNE."""
    return AugmentedRelation(p_tilde=np.array(p1.probs, dtype=np.float64), n1=p1.n, n2=0)
