"""End-to-end MR-SNE: data -> augmented relation -> embedding."""

from __future__ import annotations

import logging

from .affinity.relation import (
    AugmentedRelation,
    assemble_augmented,
    normalize_cross_graph,
    single_domain_relation,
)
from .affinity.sn_graph import build_sn_graph
from .const import DEFAULT_ITERATIONS, DEFAULT_PERPLEXITY, DEFAULT_SEED, DOMAIN_1, DOMAIN_2
from .embedder import EmbedResult, IterationCallback, embed
from .errors import ConfigError
from .models import BetaWeights, EmbedConfig, Embedding, MultimodalDataset, validate

_LOGGER = logging.getLogger(__name__)


def build_relation(dataset: MultimodalDataset, config: EmbedConfig) -> AugmentedRelation:
    """Validate the data and assemble P~ for the configured weights.

    Graphs of domains whose beta is 0 are never built, so a degenerate
    (e.g. one-hot) domain can be switched off instead of calibrated.
    """
    validate(dataset)
    config.validate_for(dataset.n1, dataset.n2)
    betas = config.betas

    if not dataset.has_domain2:
        if betas.beta2 > 0 or betas.beta12 > 0:
            raise ConfigError("single-domain data needs beta2 = beta12 = 0")
        return single_domain_relation(
            build_sn_graph(dataset.domain1, config.perplexity, config.threads, DOMAIN_1)
        )

    # 1. Within-domain stochastic neighbor graphs
    p1 = None
    if betas.beta1 > 0:
        p1 = build_sn_graph(dataset.domain1, config.perplexity, config.threads, DOMAIN_1)
    p2 = None
    if betas.beta2 > 0 and dataset.domain2 is not None:
        p2 = build_sn_graph(dataset.domain2, config.perplexity, config.threads, DOMAIN_2)

    # 2. Normalized across-domain graph
    assert dataset.cross_graph is not None
    r = normalize_cross_graph(dataset.cross_graph, config.norm_mode)

    # 3. Augmented matrix
    return assemble_augmented(p1, p2, r, betas)


def run_mrsne(
    dataset: MultimodalDataset,
    config: EmbedConfig,
    callback: IterationCallback | None = None,
) -> EmbedResult:
    """Embed both domains of a dataset into the shared K-dimensional space."""
    _LOGGER.debug("MR-SNE configuration: %s", config.to_dict())
    relation = build_relation(dataset, config)
    return embed(relation, config, callback=callback)


def reduce_to_2d(
    embedding: Embedding,
    perplexity: float = DEFAULT_PERPLEXITY,
    seed: int = DEFAULT_SEED,
    iterations: int = DEFAULT_ITERATIONS,
    threads: int = 0,
) -> Embedding:
    """Map a K>2 embedding to 2-D with single-domain t-SNE over all rows.

    Domain bookkeeping (n1, n2) is kept; K <= 2 input is returned unchanged.
    """
    if embedding.dim <= 2:
        return embedding
    config = EmbedConfig(
        perplexity=perplexity,
        dim=2,
        betas=BetaWeights(1.0, 0.0, 0.0),
        iterations=iterations,
        seed=seed,
        threads=threads,
    )
    config.validate_for(embedding.n_rows, 0)
    _LOGGER.info("Reducing %d-dimensional embedding to 2-D", embedding.dim)
    graph = build_sn_graph(embedding.coords, perplexity, threads)
    result = embed(single_domain_relation(graph), config)
    return Embedding(coords=result.embedding.coords, n1=embedding.n1, n2=embedding.n2)
