"""Multimodal relational stochastic neighbor embedding.

Embeds items of two domains (for example images and text tags) linked by
a weighted cross-domain graph into one shared low-dimensional space, and
evaluates embeddings by graph reconstruction, neighborhood hit metrics and
the variance ratio of the two domains. A linear CDMCA baseline is included.

Typical use:

    dataset = load_dataset(load_manifest("data/manifest.json"))
    config = EmbedConfig(betas=adaptive_betas(dataset.n1, dataset.n2))
    result = run_mrsne(dataset, config)
    curve = reconstruction_roc(result.embedding, dataset)
"""

from .affinity import adaptive_betas, build_sn_graph, normalize_cross_graph
from .cdmca import cdmca_embed, expand_pairs, regularized_cca
from .embedder import EmbedResult, compute_q, embed, kl_cost, kl_gradient
from .evaluation import knn_indices, knn_metric, metric_sweep, reconstruction_roc, variance_ratio
from .models import BetaWeights, EmbedConfig, Embedding, MultimodalDataset, NormMode, validate
from .pipeline import build_relation, reduce_to_2d, run_mrsne
from .storage import load_dataset, load_embedding, load_manifest, save_embedding
from .synthetic import make_latent_clusters

__version__ = "1.0.0"

__all__ = [
    "BetaWeights",
    "EmbedConfig",
    "EmbedResult",
    "Embedding",
    "MultimodalDataset",
    "NormMode",
    "adaptive_betas",
    "build_relation",
    "build_sn_graph",
    "cdmca_embed",
    "compute_q",
    "embed",
    "expand_pairs",
    "kl_cost",
    "kl_gradient",
    "knn_indices",
    "knn_metric",
    "load_dataset",
    "load_embedding",
    "load_manifest",
    "make_latent_clusters",
    "metric_sweep",
    "normalize_cross_graph",
    "reconstruction_roc",
    "reduce_to_2d",
    "regularized_cca",
    "run_mrsne",
    "save_embedding",
    "validate",
]
