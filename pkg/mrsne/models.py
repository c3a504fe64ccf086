"""Data models for MR-SNE.

Row convention shared by every module: in any stacked matrix or embedding,
rows 0..n1-1 are domain 1 in order, rows n1..n1+n2-1 are domain 2 in order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)
from typing import Any

import numpy as np
import scipy.sparse as sp

from .const import (
    DEFAULT_DIM,
    DEFAULT_ITERATIONS,
    DEFAULT_LEARNING_RATE,
    DEFAULT_LR_DECAY_EVERY,
    DEFAULT_LR_DECAY_FACTOR,
    DEFAULT_MOMENTUM,
    DEFAULT_PERPLEXITY,
    DEFAULT_SEED,
    DOMAIN_1,
    DOMAIN_2,
    NORM_NORM,
    NORM_PMI,
    NORM_UNNORM,
)
from .errors import (
    AllZeroCrossGraphError,
    ConfigError,
    DimensionMismatchError,
    EmptyDomainError,
    NegativeWeightError,
    NonFiniteValueError,
)


class NormMode(StrEnum):
    """Cross-graph preprocessing applied before global normalization."""

    UNNORM = NORM_UNNORM
    NORM = NORM_NORM
    PMI = NORM_PMI


def _frozen_array(values: Any) -> np.ndarray:
    """Copy to a read-only float64 array."""
    arr = np.array(values, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


def first_non_finite(values: np.ndarray) -> tuple[int, ...] | None:
    """Index of the first NaN/inf entry, or None."""
    bad = np.argwhere(~np.isfinite(values))
    if bad.size == 0:
        return None
    return tuple(int(v) for v in bad[0])


@dataclass(frozen=True, eq=False)
class MultimodalDataset:
    """Feature matrices of one or two domains plus the across-domain graph W."""

    domain1: np.ndarray
    domain2: np.ndarray | None = None
    cross_graph: sp.csr_matrix | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain1", _frozen_array(self.domain1))
        if self.domain2 is not None:
            object.__setattr__(self, "domain2", _frozen_array(self.domain2))
        if self.cross_graph is not None:
            graph = sp.csr_matrix(self.cross_graph, dtype=np.float64, copy=True)
            graph.sum_duplicates()
            graph.sort_indices()
            object.__setattr__(self, "cross_graph", graph)

    @property
    def n1(self) -> int:
        return int(self.domain1.shape[0])

    @property
    def n2(self) -> int:
        return 0 if self.domain2 is None else int(self.domain2.shape[0])

    @property
    def has_domain2(self) -> bool:
        return self.domain2 is not None

    @property
    def n_items(self) -> int:
        return self.n1 + self.n2

    def dense_graph(self) -> np.ndarray:
        """W as a dense n1 x n2 array (zeros when domain 2 is absent)."""
        if self.cross_graph is None:
            return np.zeros((self.n1, self.n2))
        return np.asarray(self.cross_graph.toarray())


def validate(dataset: MultimodalDataset) -> None:
    """Check every MultimodalDataset invariant, raising on the first violation."""
    x1 = dataset.domain1
    if x1.ndim != 2:
        raise DimensionMismatchError(f"domain 1 must be a matrix, got {x1.ndim} dimensions")
    if x1.shape[0] < 2:
        raise EmptyDomainError(DOMAIN_1, x1.shape[0], 2)
    if (bad := first_non_finite(x1)) is not None:
        raise NonFiniteValueError("domain 1", bad)

    if dataset.domain2 is None:
        if dataset.cross_graph is not None and dataset.cross_graph.nnz:
            raise DimensionMismatchError("cross graph given without a domain 2")
        return

    x2 = dataset.domain2
    if x2.ndim != 2:
        raise DimensionMismatchError(f"domain 2 must be a matrix, got {x2.ndim} dimensions")
    if x2.shape[0] < 1:
        raise EmptyDomainError(DOMAIN_2, x2.shape[0], 1)
    if (bad := first_non_finite(x2)) is not None:
        raise NonFiniteValueError("domain 2", bad)

    graph = dataset.cross_graph
    if graph is None:
        raise AllZeroCrossGraphError()
    if graph.shape != (dataset.n1, dataset.n2):
        raise DimensionMismatchError(
            f"cross graph shape {graph.shape} does not match ({dataset.n1}, {dataset.n2})"
        )
    coo = graph.tocoo()
    order = np.lexsort((coo.col, coo.row))
    rows, cols, data = coo.row[order], coo.col[order], coo.data[order]
    non_finite = ~np.isfinite(data)
    if non_finite.any():
        k = int(np.argmax(non_finite))
        raise NonFiniteValueError("cross graph", (int(rows[k]), int(cols[k])))
    negative = data < 0
    if negative.any():
        k = int(np.argmax(negative))
        raise NegativeWeightError(int(rows[k]), int(cols[k]))
    if not (data > 0).any():
        raise AllZeroCrossGraphError()


@dataclass(frozen=True)
class BetaWeights:
    """Block weights of the augmented matrix, normalized to sum to 1.

    Inputs are relative weights: BetaWeights(1, 0, 1) == BetaWeights(0.5, 0, 0.5).
    """

    beta1: float
    beta2: float
    beta12: float

    def __post_init__(self) -> None:
        raw = (float(self.beta1), float(self.beta2), float(self.beta12))
        if not all(np.isfinite(raw)):
            raise ConfigError(f"beta weights must be finite, got {raw}")
        if min(raw) < 0:
            raise ConfigError(f"beta weights must be nonnegative, got {raw}")
        total = sum(raw)
        if total <= 0:
            raise ConfigError("beta weights must have a positive sum")
        object.__setattr__(self, "beta1", raw[0] / total)
        object.__setattr__(self, "beta2", raw[1] / total)
        object.__setattr__(self, "beta12", raw[2] / total)

    @classmethod
    def parse(cls, text: str) -> BetaWeights:
        """Parse "a,b,c" (beta1, beta2, beta12)."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ConfigError(f"expected three comma-separated betas, got {text!r}")
        try:
            a, b, c = (float(p) for p in parts)
        except ValueError as err:
            raise ConfigError(f"betas must be numbers, got {text!r}") from err
        return cls(a, b, c)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.beta1, self.beta2, self.beta12)


@dataclass(frozen=True)
class EmbedConfig:
    """Objective and optimizer settings for one MR-SNE run."""

    perplexity: float = DEFAULT_PERPLEXITY
    dim: int = DEFAULT_DIM
    betas: BetaWeights = field(default_factory=lambda: BetaWeights(1.0, 1.0, 1.0))
    norm_mode: NormMode = NormMode.UNNORM
    iterations: int = DEFAULT_ITERATIONS
    learning_rate: float = DEFAULT_LEARNING_RATE
    momentum: float = DEFAULT_MOMENTUM
    lr_decay_every: int = DEFAULT_LR_DECAY_EVERY
    lr_decay_factor: float = DEFAULT_LR_DECAY_FACTOR
    seed: int = DEFAULT_SEED
    # Worker cap for row-parallel stages; 0 lets the pool decide
    threads: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "norm_mode", NormMode(self.norm_mode))
        if not self.perplexity > 1:
            raise ConfigError(f"perplexity must exceed 1, got {self.perplexity}")
        if self.dim < 1:
            raise ConfigError(f"dimension must be >= 1, got {self.dim}")
        if self.iterations < 0:
            raise ConfigError(f"iterations must be >= 0, got {self.iterations}")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning rate must be positive, got {self.learning_rate}")
        if self.momentum < 0:
            raise ConfigError(f"momentum must be nonnegative, got {self.momentum}")
        if self.lr_decay_every < 1:
            raise ConfigError(f"lr_decay_every must be >= 1, got {self.lr_decay_every}")
        if not self.lr_decay_factor > 0:
            raise ConfigError(f"lr_decay_factor must be positive, got {self.lr_decay_factor}")
        if self.seed < 0:
            raise ConfigError(f"seed must be unsigned, got {self.seed}")
        if self.threads < 0:
            raise ConfigError(f"threads must be >= 0, got {self.threads}")

    def validate_for(self, n1: int, n2: int) -> None:
        """Check that the perplexity is achievable in every weighted domain."""
        for domain, n, beta in ((DOMAIN_1, n1, self.betas.beta1), (DOMAIN_2, n2, self.betas.beta2)):
            if beta > 0 and not self.perplexity < n:
                raise ConfigError(
                    f"perplexity {self.perplexity:g} must be below the {n} items of domain {domain}"
                )

    @classmethod
    def from_dict(cls, data: dict) -> EmbedConfig:
        """Create from a dictionary; missing keys keep their defaults."""
        known = {f.name for f in fields(cls)}
        kwargs = {k: v for k, v in data.items() if k in known}
        betas = kwargs.get("betas")
        if isinstance(betas, (list, tuple)):
            kwargs["betas"] = BetaWeights(*betas)
        elif isinstance(betas, dict):
            kwargs["betas"] = BetaWeights(**betas)
        return cls(**kwargs)

    def to_dict(self) -> dict:
        """Convert to a JSON-friendly dictionary."""
        return {
            "perplexity": self.perplexity,
            "dim": self.dim,
            "betas": list(self.betas.as_tuple()),
            "norm_mode": str(self.norm_mode),
            "iterations": self.iterations,
            "learning_rate": self.learning_rate,
            "momentum": self.momentum,
            "lr_decay_every": self.lr_decay_every,
            "lr_decay_factor": self.lr_decay_factor,
            "seed": self.seed,
            "threads": self.threads,
        }


@dataclass(frozen=True, eq=False)
class Embedding:
    """K-dimensional coordinates of every item, domain 1 rows first."""

    coords: np.ndarray
    n1: int
    n2: int = 0

    def __post_init__(self) -> None:
        coords = _frozen_array(self.coords)
        if coords.ndim == 1:
            coords = coords.reshape(-1, 1)
            coords.setflags(write=False)
        if coords.shape[0] != self.n1 + self.n2:
            raise DimensionMismatchError(
                f"embedding has {coords.shape[0]} rows, expected {self.n1} + {self.n2}"
            )
        if (bad := first_non_finite(coords)) is not None:
            raise NonFiniteValueError("embedding", bad)
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return int(self.coords.shape[1])

    @property
    def n_rows(self) -> int:
        return self.n1 + self.n2

    @property
    def domain1_coords(self) -> np.ndarray:
        return self.coords[: self.n1]

    @property
    def domain2_coords(self) -> np.ndarray:
        return self.coords[self.n1 :]

    def domain_of_row(self, row: int) -> tuple[int, int]:
        """Map a row to (domain id, index within the domain)."""
        if not 0 <= row < self.n_rows:
            raise IndexError(f"row {row} out of range for {self.n_rows} rows")
        if row < self.n1:
            return DOMAIN_1, row
        return DOMAIN_2, row - self.n1

    def row_of(self, domain: int, index: int) -> int:
        """Map (domain id, index within the domain) to a row."""
        if domain == DOMAIN_1 and 0 <= index < self.n1:
            return index
        if domain == DOMAIN_2 and 0 <= index < self.n2:
            return self.n1 + index
        raise IndexError(f"no item {index} in domain {domain}")

    def rows_of(self, domain: int) -> np.ndarray:
        """All row indices belonging to a domain."""
        if domain == DOMAIN_1:
            return np.arange(self.n1)
        if domain == DOMAIN_2:
            return np.arange(self.n1, self.n_rows)
        raise IndexError(f"unknown domain {domain}")
