"""Tests for the Student-t joint, the KL objective and the optimizer."""

import math

import numpy as np
import pytest

from mrsne.affinity.relation import single_domain_relation
from mrsne.affinity.sn_graph import build_sn_graph
from mrsne.embedder import QJoint, compute_q, embed, initial_coords, kl_cost, kl_gradient
from mrsne.errors import ShapeMismatchError, ZeroQWithPositivePError
from mrsne.models import BetaWeights, EmbedConfig, Embedding
from mrsne.pipeline import build_relation, reduce_to_2d, run_mrsne
from mrsne.synthetic import make_latent_clusters


def _random_p(rng, m):
    """A random symmetric joint distribution with zero diagonal."""
    upper = np.triu(rng.uniform(size=(m, m)) * (rng.uniform(size=(m, m)) > 0.3), k=1)
    upper[0, 1] += 0.1
    p = upper + upper.T
    return p / p.sum()


def _tsne_objective(p, coords):
    """Single-domain t-SNE cost evaluated pair by pair."""
    m = coords.shape[0]
    num = [[0.0] * m for _ in range(m)]
    z = 0.0
    for i in range(m):
        for j in range(m):
            if i != j:
                num[i][j] = 1.0 / (1.0 + float(np.sum((coords[i] - coords[j]) ** 2)))
                z += num[i][j]
    cost = 0.0
    for i in range(m):
        for j in range(m):
            if i != j and p[i, j] > 0:
                cost += p[i, j] * math.log(p[i, j] / (num[i][j] / z))
    return cost


def _finite_difference(p, coords, h=1e-5):
    grad = np.zeros_like(coords)
    for idx in np.ndindex(*coords.shape):
        plus = coords.copy()
        minus = coords.copy()
        plus[idx] += h
        minus[idx] -= h
        grad[idx] = (kl_cost(p, compute_q(plus)) - kl_cost(p, compute_q(minus))) / (2 * h)
    return grad


@pytest.fixture
def cluster_relation():
    """Augmented relation of a 30 + 30 item three-cluster dataset."""
    dataset, _ = make_latent_clusters(n1=30, n2=30, d1=5, d2=5, clusters=3, link_prob=0.3, seed=4)
    config = EmbedConfig(perplexity=8.0, betas=BetaWeights(1, 1, 1))
    return build_relation(dataset, config)


class TestComputeQ:
    """compute_q()."""

    def test_two_points(self):
        """Two points at distance 1 split the mass."""
        q = compute_q(np.array([[0.0], [1.0]]))
        np.testing.assert_allclose(q.q, [[0.0, 0.5], [0.5, 0.0]])
        assert q.z == pytest.approx(1.0)

    def test_equidistant(self):
        """Three equidistant points give 1/6 per ordered pair."""
        q = compute_q(np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]]))
        expected = np.full((3, 3), 1 / 6)
        np.fill_diagonal(expected, 0.0)
        np.testing.assert_allclose(q.q, expected, atol=1e-12)

    def test_scalar_evaluation(self):
        """Coords 0, 1, 3 give z = 1.6."""
        q = compute_q(np.array([0.0, 1.0, 3.0]))
        assert q.z == pytest.approx(1.6)
        assert q.q[0, 1] == pytest.approx(0.3125)
        assert q.q[0, 2] == pytest.approx(0.0625)
        assert q.q[1, 2] == pytest.approx(0.125)

    def test_mass(self, rng):
        """Ordered-pair mass is 1 for random coordinates."""
        q = compute_q(rng.normal(size=(15, 3)))
        assert q.q.sum() == pytest.approx(1.0, abs=1e-10)
        assert np.all(np.diag(q.q) == 0)

    def test_single_point(self):
        """A single point has no pairs."""
        with pytest.raises(ShapeMismatchError):
            compute_q(np.zeros((1, 2)))


class TestKlCost:
    """kl_cost()."""

    def test_identical_distributions(self, rng):
        """KL(Q || Q) = 0."""
        q = compute_q(rng.normal(size=(6, 2)))
        assert kl_cost(q.q, q) == pytest.approx(0.0, abs=1e-12)

    def test_scalar_evaluation(self):
        """p = (0.5, 0.5), q = (0.25, 0.75) gives 0.143841."""
        p = np.array([[0.0, 0.5], [0.5, 0.0]])
        q = QJoint(q=np.array([[0.0, 0.25], [0.75, 0.0]]), num=np.ones((2, 2)), z=1.0)
        assert kl_cost(p, q) == pytest.approx(0.5 * math.log(2) + 0.5 * math.log(2 / 3), abs=1e-12)
        assert kl_cost(p, q) == pytest.approx(0.143841, abs=1e-6)

    def test_nonnegative(self, rng):
        """Gibbs inequality on random pairs."""
        for _ in range(20):
            m = int(rng.integers(3, 10))
            assert kl_cost(_random_p(rng, m), compute_q(rng.normal(size=(m, 2)))) >= -1e-12

    def test_zero_q_on_support(self):
        """A vanishing q where p has mass is reported with its pair."""
        p = np.array([[0.0, 0.5], [0.5, 0.0]])
        q = QJoint(q=np.array([[0.0, 0.0], [1.0, 0.0]]), num=np.ones((2, 2)), z=1.0)
        with pytest.raises(ZeroQWithPositivePError) as excinfo:
            kl_cost(p, q)
        assert (excinfo.value.i, excinfo.value.j) == (0, 1)

    def test_shape_mismatch(self, rng):
        """P and Q must have the same size."""
        with pytest.raises(ShapeMismatchError):
            kl_cost(_random_p(rng, 4), compute_q(rng.normal(size=(5, 2))))

    def test_translation_and_rotation_invariance(self, rng):
        """Rigid motions of the embedding leave the cost unchanged."""
        p = _random_p(rng, 8)
        coords = rng.normal(size=(8, 2))
        angle = 0.7
        rotation = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
        base = kl_cost(p, compute_q(coords))
        assert kl_cost(p, compute_q(coords + np.array([5.0, -2.0]))) == pytest.approx(base, abs=1e-10)
        assert kl_cost(p, compute_q(coords @ rotation.T)) == pytest.approx(base, abs=1e-10)

    def test_reduces_to_tsne(self, rng):
        """With one domain the objective equals the single-domain t-SNE cost."""
        for _ in range(10):
            m = int(rng.integers(6, 12))
            relation = single_domain_relation(build_sn_graph(rng.normal(size=(m, 4)), 3.0))
            coords = rng.normal(size=(m, 2))
            expected = _tsne_objective(relation.p_tilde, coords)
            assert kl_cost(relation, compute_q(coords)) == pytest.approx(expected, abs=1e-10)


class TestKlGradient:
    """kl_gradient()."""

    def test_matches_finite_differences(self, rng):
        """Analytic and central-difference gradients agree on random instances."""
        for trial in range(25):
            m = int(rng.integers(3, 11))
            dim = 1 + trial % 3
            p = _random_p(rng, m)
            coords = rng.normal(size=(m, dim))
            analytic = kl_gradient(p, coords, compute_q(coords))
            numeric = _finite_difference(p, coords)
            error = np.linalg.norm(analytic - numeric) / max(np.linalg.norm(numeric), 1e-12)
            assert error <= 1e-4

    def test_zero_at_optimum(self, rng):
        """When P equals Q the gradient vanishes."""
        coords = rng.normal(size=(7, 2))
        q = compute_q(coords)
        assert np.linalg.norm(kl_gradient(q.q, coords, q)) <= 1e-8

    def test_two_points_opposite(self):
        """Two points get opposite gradients."""
        coords = np.array([[0.0, 0.0], [0.3, 0.1]])
        p = np.array([[0.0, 0.5], [0.5, 0.0]])
        grad = kl_gradient(p, coords, compute_q(coords))
        np.testing.assert_allclose(grad[0], -grad[1], atol=1e-12)

    def test_rows_sum_to_zero(self, rng):
        """Translation invariance makes the gradient rows cancel."""
        p = _random_p(rng, 9)
        coords = rng.normal(size=(9, 3))
        grad = kl_gradient(p, coords, compute_q(coords))
        np.testing.assert_allclose(grad.sum(axis=0), 0.0, atol=1e-9)

    def test_shape_mismatch(self, rng):
        """Coordinates must match P."""
        coords = rng.normal(size=(4, 2))
        with pytest.raises(ShapeMismatchError):
            kl_gradient(_random_p(rng, 5), coords, compute_q(coords))


class TestEmbed:
    """embed() and the end-to-end run."""

    def test_zero_iterations_returns_initialization(self, cluster_relation):
        """T = 0 returns the seeded N(0, 1e-4) draw."""
        config = EmbedConfig(iterations=0, seed=11)
        result = embed(cluster_relation, config)
        np.testing.assert_array_equal(result.embedding.coords, initial_coords(60, 2, 11))
        assert result.final_kl is None

    def test_initialization_scale(self):
        """Initial coordinates have standard deviation 1e-2."""
        coords = initial_coords(5000, 2, 0)
        assert coords.std() == pytest.approx(1e-2, rel=0.05)

    def test_same_seed_is_bitwise_identical(self, cluster_relation):
        """Two runs with one seed produce the same coordinates."""
        config = EmbedConfig(iterations=60, seed=3)
        first = embed(cluster_relation, config).embedding.coords
        second = embed(cluster_relation, config).embedding.coords
        np.testing.assert_array_equal(first, second)

    def test_learning_rate_schedule(self, cluster_relation):
        """The rate is eta through step 400 and eta / 10 afterwards."""
        seen = {}

        def record(state, q):
            seen[state.t] = state.eta_t

        embed(cluster_relation, EmbedConfig(iterations=500), callback=record)
        assert sorted(seen) == list(range(1, 501))
        assert all(seen[t] == 100.0 for t in range(1, 401))
        assert all(seen[t] == pytest.approx(10.0) for t in range(401, 501))

    def test_q_mass_every_iteration(self, cluster_relation):
        """Q has unit mass at each of 50 steps."""
        masses = []
        embed(cluster_relation, EmbedConfig(iterations=50), callback=lambda state, q: masses.append(q.q.sum()))
        assert len(masses) == 50
        assert all(abs(mass - 1.0) <= 1e-10 for mass in masses)

    def test_converges_on_clusters(self, cluster_relation):
        """500 steps at least halve the objective and end non-increasing."""
        history = embed(cluster_relation, EmbedConfig()).kl_history
        assert history.size == 500
        assert history[-1] < 0.5 * history[0]
        assert np.all(np.diff(history[-50:]) <= 1e-6)

    def test_run_mrsne_keeps_domains(self, small_synthetic):
        """The pipeline returns one row per item with domain bookkeeping."""
        result = run_mrsne(small_synthetic, EmbedConfig(perplexity=5.0, iterations=30, threads=2))
        assert result.embedding.n1 == 30
        assert result.embedding.n2 == 15
        assert result.embedding.coords.shape == (45, 2)

    def test_thread_cap_does_not_change_output(self, small_synthetic):
        """Results do not depend on the number of workers."""
        base = EmbedConfig(perplexity=5.0, iterations=30)
        serial = run_mrsne(small_synthetic, EmbedConfig.from_dict({**base.to_dict(), "threads": 1}))
        pooled = run_mrsne(small_synthetic, EmbedConfig.from_dict({**base.to_dict(), "threads": 3}))
        np.testing.assert_array_equal(serial.embedding.coords, pooled.embedding.coords)


class TestReduceTo2d:
    """reduce_to_2d()."""

    def test_two_dimensional_input_unchanged(self):
        """K = 2 embeddings pass through."""
        embedding = Embedding(coords=np.zeros((4, 2)), n1=2, n2=2)
        assert reduce_to_2d(embedding) is embedding

    def test_reduces_and_keeps_domains(self, rng):
        """K = 5 input becomes K = 2 with n1 and n2 intact."""
        embedding = Embedding(coords=rng.normal(size=(40, 5)), n1=25, n2=15)
        reduced = reduce_to_2d(embedding, perplexity=8.0, iterations=50)
        assert reduced.dim == 2
        assert (reduced.n1, reduced.n2) == (25, 15)
