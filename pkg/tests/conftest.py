"""Shared fixtures for MR-SNE tests."""

from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp

from mrsne.models import Embedding, MultimodalDataset
from mrsne.synthetic import make_latent_clusters

# Image -> linked tags of the 8-image/4-tag toy instance
TOY_LINKS = {
    0: [0],
    1: [0, 1],
    2: [1],
    3: [2],
    4: [2, 3],
    5: [3],
    6: [0, 3],
    7: [2],
}


def toy_cross_graph() -> sp.csr_matrix:
    w = np.zeros((8, 4))
    for image, tags in TOY_LINKS.items():
        for tag in tags:
            w[image, tag] = 1.0
    # one weighted edge; evaluation only looks at w > 0
    w[4, 3] = 2.5
    return sp.csr_matrix(w)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so every test sees the same draws."""
    return np.random.default_rng(20240611)


@pytest.fixture
def toy_dataset() -> MultimodalDataset:
    """8 images in 3-D, 4 tags in 2-D, hand-built W."""
    features = np.random.default_rng(3)
    return MultimodalDataset(
        domain1=features.normal(size=(8, 3)),
        domain2=features.normal(size=(4, 2)),
        cross_graph=toy_cross_graph(),
    )


@pytest.fixture
def toy_embedding() -> Embedding:
    """12 rows in 2-D for the toy instance (8 images then 4 tags)."""
    coords = np.array(
        [
            [0.0, 0.0],
            [0.4, 0.3],
            [1.1, 0.2],
            [3.0, 3.1],
            [3.6, 2.4],
            [4.2, 1.7],
            [1.9, 1.5],
            [2.7, 3.9],
            [0.3, 0.9],
            [1.3, 0.7],
            [3.3, 3.6],
            [4.0, 2.0],
        ]
    )
    return Embedding(coords=coords, n1=8, n2=4)


@pytest.fixture
def small_synthetic() -> MultimodalDataset:
    """Three latent clusters, 30 + 15 items."""
    dataset, _ = make_latent_clusters(n1=30, n2=15, d1=6, d2=4, clusters=3, link_prob=0.4, seed=1)
    return dataset
