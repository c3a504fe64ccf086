"""Within-domain stochastic neighbor graph.

Gaussian conditional probabilities p(j|i) with a bandwidth per point,
calibrated so that 2**H_i equals the requested perplexity, then symmetrized
into a joint distribution p_ij = (p(i|j) + p(j|i)) / 2n.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform
from scipy.stats import entropy

from ..const import (
    CALIBRATION_BRACKET,
    CALIBRATION_MAX_ITER,
    CALIBRATION_TOLERANCE,
    DOMAIN_1,
)
from ..errors import (
    DegenerateRowError,
    EmptyDomainError,
    NonFiniteValueError,
    PerplexityUnreachableError,
)
from ..models import first_non_finite
from ..workers import map_rows

_LOGGER = logging.getLogger(__name__)

# Relative spread below which a row's distances count as all equal
_EQUAL_DISTANCE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class SnGraph:
    """Symmetric joint probabilities of one domain and the per-point bandwidths."""

    probs: np.ndarray
    bandwidths: np.ndarray

    @property
    def n(self) -> int:
        return int(self.probs.shape[0])


def squared_distance_matrix(data: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances, exactly symmetric with a zero diagonal."""
    data = np.asarray(data, dtype=np.float64)
    if data.ndim == 1:
        data = data.reshape(-1, 1)
    if (bad := first_non_finite(data)) is not None:
        raise NonFiniteValueError("data matrix", bad)
    if data.shape[0] < 2:
        return np.zeros((data.shape[0], data.shape[0]))
    return squareform(pdist(data, metric="sqeuclidean"))


def _neighbor_distances(sq_dists_from_i: np.ndarray, i: int) -> np.ndarray:
    """Distances from point i to every other point (i removed)."""
    return np.delete(np.asarray(sq_dists_from_i, dtype=np.float64), i)


def _kernel(others: np.ndarray, index: int, sigma: float) -> np.ndarray:
    """Normalized Gaussian weights over the neighbors of one point.

    The smallest distance is subtracted before exponentiation so the
    largest exponent is exactly 0.
    """
    finite = np.isfinite(others)
    if not finite.any():
        raise DegenerateRowError(index)
    shifted = others - others[finite].min()
    weights = np.exp(-shifted / (2.0 * sigma * sigma))
    return weights / weights.sum()


def conditional_row(sq_dists_from_i: np.ndarray, i: int, sigma: float) -> np.ndarray:
    """p(j|i) for every j, with a zero at position i."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    row = np.zeros(len(sq_dists_from_i))
    mask = np.ones(len(sq_dists_from_i), dtype=bool)
    mask[i] = False
    row[mask] = _kernel(_neighbor_distances(sq_dists_from_i, i), i, sigma)
    return row


def _perplexity(others: np.ndarray, index: int, sigma: float) -> float:
    """2**H of the conditional distribution at bandwidth sigma (H in bits)."""
    return float(2.0 ** entropy(_kernel(others, index, sigma), base=2))


def calibrate_bandwidth(sq_dists_from_i: np.ndarray, i: int, perplexity: float) -> float:
    """Bisect the bandwidth of point i until 2**H_i matches the perplexity.

    Perplexity is nondecreasing in sigma, so bisection (on a log scale, from
    [rho * 1e-20, rho * 1e20] with rho the RMS positive distance) converges.
    Rows whose distances are all equal have a constant perplexity of n - 1.
    """
    others = _neighbor_distances(sq_dists_from_i, i)
    if others.size == 0:
        raise DegenerateRowError(i)
    if not np.isfinite(others).any():
        raise DegenerateRowError(i)
    tolerance = CALIBRATION_TOLERANCE * perplexity

    positive = others[(others > 0) & np.isfinite(others)]
    rho = math.sqrt(float(positive.mean())) if positive.size else 1.0

    spread = float(others.max() - others.min())
    if spread <= _EQUAL_DISTANCE_RTOL * float(others.max()):
        achievable = float(others.size)
        if abs(achievable - perplexity) <= tolerance:
            return rho
        raise PerplexityUnreachableError(i, perplexity, achievable)

    log_lo = math.log(rho / CALIBRATION_BRACKET)
    log_hi = math.log(rho * CALIBRATION_BRACKET)
    current = 0.0
    for iteration in range(CALIBRATION_MAX_ITER):
        sigma = math.exp(0.5 * (log_lo + log_hi))
        current = _perplexity(others, i, sigma)
        if abs(current - perplexity) <= tolerance:
            _LOGGER.debug("Point %d calibrated in %d steps: sigma=%g", i, iteration + 1, sigma)
            return sigma
        if current > perplexity:
            log_hi = math.log(sigma)
        else:
            log_lo = math.log(sigma)

    endpoint = math.exp(log_hi) if current < perplexity else math.exp(log_lo)
    _LOGGER.warning(
        "Perplexity %g not reached at point %d after %d steps (got %g); using sigma=%g",
        perplexity,
        i,
        CALIBRATION_MAX_ITER,
        current,
        endpoint,
    )
    return endpoint


def build_sn_graph(
    data: np.ndarray,
    perplexity: float,
    threads: int = 0,
    domain: int = DOMAIN_1,
) -> SnGraph:
    """Build the symmetric stochastic neighbor graph of one domain.

    A PerplexityUnreachableError raised here carries the domain id.
    """
    dists = squared_distance_matrix(data)
    n = dists.shape[0]
    if n < 2:
        raise EmptyDomainError(domain, n, 2)

    try:
        sigmas = map_rows(lambda i: calibrate_bandwidth(dists[i], i, perplexity), range(n), threads)
    except PerplexityUnreachableError as err:
        err.domain = domain
        raise
    conditional = np.vstack([conditional_row(dists[i], i, sigmas[i]) for i in range(n)])
    probs = (conditional + conditional.T) / (2.0 * n)
    _LOGGER.info("Built SN graph of domain %d over %d points (perplexity %g)", domain, n, perplexity)
    return SnGraph(probs=probs, bandwidths=np.asarray(sigmas, dtype=np.float64))
