"""Low-dimensional Student-t joint, KL objective and the momentum optimizer."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .affinity.relation import AugmentedRelation
from .const import INIT_STD, KL_LOG_EVERY
from .errors import (
    DivergedObjectiveError,
    NonFiniteValueError,
    ShapeMismatchError,
    ZeroQWithPositivePError,
)
from .models import EmbedConfig, Embedding, first_non_finite

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class QJoint:
    """Student-t joint over ordered pairs, with the kernel cached for the gradient."""

    q: np.ndarray
    num: np.ndarray
    z: float


@dataclass(eq=False)
class OptimizerState:
    """Iterate of the momentum gradient descent."""

    y: np.ndarray
    y_prev: np.ndarray
    eta_t: float
    t: int = 0
    kl_history: list[float] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class EmbedResult:
    """Final embedding and the per-iteration objective trace."""

    embedding: Embedding
    kl_history: np.ndarray

    @property
    def final_kl(self) -> float | None:
        return float(self.kl_history[-1]) if self.kl_history.size else None


IterationCallback = Callable[[OptimizerState, QJoint], None]


def _as_matrix(p_tilde: AugmentedRelation | np.ndarray) -> np.ndarray:
    if isinstance(p_tilde, AugmentedRelation):
        return p_tilde.p_tilde
    return np.asarray(p_tilde, dtype=np.float64)


def compute_q(coords: np.ndarray) -> QJoint:
    """Heavy-tailed kernel (1 + d^2)^-1 normalized jointly over every pair of every domain."""
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim == 1:
        coords = coords.reshape(-1, 1)
    if coords.shape[0] < 2:
        raise ShapeMismatchError(f"need at least 2 points, got {coords.shape[0]}")
    if (bad := first_non_finite(coords)) is not None:
        raise NonFiniteValueError("embedding coordinates", bad)
    num = 1.0 / (1.0 + squareform(pdist(coords, metric="sqeuclidean")))
    np.fill_diagonal(num, 0.0)
    z = float(num.sum())
    return QJoint(q=num / z, num=num, z=z)


def kl_cost(p_tilde: AugmentedRelation | np.ndarray, q: QJoint) -> float:
    """KL(P~ || Q~) in nats over ordered distinct pairs, with 0 log 0 = 0."""
    p = _as_matrix(p_tilde)
    if p.shape != q.q.shape:
        raise ShapeMismatchError(f"P~ is {p.shape} but Q~ is {q.q.shape}")
    support = p > 0
    q_on_support = q.q[support]
    if (q_on_support <= 0).any():
        i, j = np.argwhere(support & (q.q <= 0))[0]
        raise ZeroQWithPositivePError(int(i), int(j))
    p_on_support = p[support]
    return float(np.sum(p_on_support * np.log(p_on_support / q_on_support)))


def kl_gradient(p_tilde: AugmentedRelation | np.ndarray, coords: np.ndarray, q: QJoint) -> np.ndarray:
    """dC/dy_i = 4 sum_j (p_ij - q_ij) num_ij (y_i - y_j)."""
    p = _as_matrix(p_tilde)
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim == 1:
        coords = coords.reshape(-1, 1)
    if p.shape != q.q.shape or coords.shape[0] != p.shape[0]:
        raise ShapeMismatchError(
            f"P~ {p.shape}, Q~ {q.q.shape} and coordinates {coords.shape} do not agree"
        )
    weights = (p - q.q) * q.num
    return 4.0 * (weights.sum(axis=1)[:, None] * coords - weights @ coords)


def initial_coords(m: int, dim: int, seed: int) -> np.ndarray:
    """Draw starting coordinates from N(0, INIT_STD**2)."""
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, INIT_STD, size=(m, dim))


def embed(
    p_tilde: AugmentedRelation,
    config: EmbedConfig,
    callback: IterationCallback | None = None,
) -> EmbedResult:
    """Minimize KL(P~ || Q~) by full-batch gradient descent with momentum.

    Runs exactly config.iterations steps. Y(0) equals Y(1), so the first
    momentum term vanishes; after step t the rate is multiplied by
    lr_decay_factor whenever t is a multiple of lr_decay_every.
    """
    p = p_tilde.p_tilde
    m = p.shape[0]
    state = OptimizerState(
        y=initial_coords(m, config.dim, config.seed),
        y_prev=np.empty((m, config.dim)),
        eta_t=config.learning_rate,
    )
    state.y_prev = state.y.copy()

    for t in range(1, config.iterations + 1):
        q = compute_q(state.y)
        kl = kl_cost(p, q)
        if not np.isfinite(kl):
            raise DivergedObjectiveError(t)
        state.t = t
        state.kl_history.append(kl)
        if callback is not None:
            callback(state, q)
        if t == 1 or t % KL_LOG_EVERY == 0:
            _LOGGER.debug("Iteration %d: KL=%.6f eta=%g", t, kl, state.eta_t)

        grad = kl_gradient(p, state.y, q)
        y_next = state.y - state.eta_t * grad + config.momentum * (state.y - state.y_prev)
        if not np.isfinite(y_next).all():
            raise DivergedObjectiveError(t)
        state.y_prev, state.y = state.y, y_next

        if t % config.lr_decay_every == 0:
            state.eta_t *= config.lr_decay_factor
            _LOGGER.debug("Learning rate decayed to %g after iteration %d", state.eta_t, t)

    history = np.asarray(state.kl_history, dtype=np.float64)
    if history.size:
        _LOGGER.info("Optimisation finished after %d iterations: KL %.6f -> %.6f", history.size, history[0], history[-1])
    embedding = Embedding(coords=state.y, n1=p_tilde.n1, n2=p_tilde.n2)
    return EmbedResult(embedding=embedding, kl_history=history)
