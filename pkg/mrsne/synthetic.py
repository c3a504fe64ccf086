"""Synthetic two-domain data with shared latent clusters."""

from __future__ import annotations

import logging

import numpy as np
import scipy.sparse as sp

from .const import DEFAULT_SEED
from .errors import ConfigError
from .models import MultimodalDataset

_LOGGER = logging.getLogger(__name__)

# Latent cluster centres sit on a circle of this radius
CLUSTER_RADIUS = 4.0
LATENT_SPREAD = 0.5
DEFAULT_NOISE = 0.1


def _cluster_ids(n: int, clusters: int, rng: np.random.Generator) -> np.ndarray:
    """Balanced cluster assignment in random order."""
    ids = np.arange(n) % clusters
    rng.shuffle(ids)
    return ids


def _observe(latent: np.ndarray, dim: int, noise: float, rng: np.random.Generator) -> np.ndarray:
    """A random linear map of the latent points plus isotropic noise."""
    mapping = rng.normal(size=(latent.shape[1], dim))
    return latent @ mapping + noise * rng.normal(size=(latent.shape[0], dim))


def make_latent_clusters(
    n1: int = 90,
    n2: int = 30,
    d1: int = 10,
    d2: int = 5,
    clusters: int = 3,
    link_prob: float = 0.3,
    noise: float = DEFAULT_NOISE,
    seed: int = DEFAULT_SEED,
    one_hot_domain2: bool = False,
) -> tuple[MultimodalDataset, tuple[np.ndarray, np.ndarray]]:
    """Generate a dataset whose domains and links share a 2-D latent cluster structure.

    Same-cluster pairs are linked with probability link_prob; a domain-1 item
    left without links is joined to one random domain-2 item of its cluster.
    With one_hot_domain2 the domain-2 features are the identity matrix.

    Returns the dataset and the cluster id of every item per domain.
    """
    if clusters < 1:
        raise ConfigError(f"need at least one cluster, got {clusters}")
    if n1 < 2 or n2 < clusters:
        raise ConfigError(f"need n1 >= 2 and n2 >= clusters, got n1={n1}, n2={n2}")
    if d1 < 1 or d2 < 1:
        raise ConfigError(f"feature dimensions must be positive, got {d1} and {d2}")
    if not 0 < link_prob <= 1:
        raise ConfigError(f"link probability must lie in (0, 1], got {link_prob}")
    if noise < 0:
        raise ConfigError(f"noise must be nonnegative, got {noise}")

    rng = np.random.default_rng(seed)
    angles = 2 * np.pi * np.arange(clusters) / clusters
    centres = CLUSTER_RADIUS * np.column_stack([np.cos(angles), np.sin(angles)])

    ids1 = _cluster_ids(n1, clusters, rng)
    ids2 = _cluster_ids(n2, clusters, rng)
    latent1 = centres[ids1] + LATENT_SPREAD * rng.normal(size=(n1, 2))
    latent2 = centres[ids2] + LATENT_SPREAD * rng.normal(size=(n2, 2))

    domain1 = _observe(latent1, d1, noise, rng)
    domain2 = np.eye(n2) if one_hot_domain2 else _observe(latent2, d2, noise, rng)

    same_cluster = ids1[:, None] == ids2[None, :]
    links = same_cluster & (rng.random((n1, n2)) < link_prob)
    for i in np.flatnonzero(~links.any(axis=1)):
        links[i, rng.choice(np.flatnonzero(same_cluster[i]))] = True

    dataset = MultimodalDataset(
        domain1=domain1,
        domain2=domain2,
        cross_graph=sp.csr_matrix(links.astype(np.float64)),
    )
    _LOGGER.debug("Generated %d + %d items in %d clusters with %d links", n1, n2, clusters, int(links.sum()))
    return dataset, (ids1, ids2)
