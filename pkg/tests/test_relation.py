"""Tests for cross-graph normalization and the augmented relation."""

import numpy as np
import pytest
import scipy.sparse as sp

from mrsne.affinity.relation import (
    CrossRelation,
    adaptive_betas,
    assemble_augmented,
    normalize_cross_graph,
    single_domain_relation,
)
from mrsne.affinity.sn_graph import SnGraph, build_sn_graph
from mrsne.errors import (
    AllZeroCrossGraphError,
    DimensionMismatchError,
    MissingGraphWithPositiveBetaError,
    NegativeWeightError,
)
from mrsne.models import BetaWeights, NormMode


def _random_graph(rng, n):
    return build_sn_graph(rng.normal(size=(n, 3)), perplexity=min(4.0, n - 1.5))


class TestNormalizeCrossGraph:
    """normalize_cross_graph() in its three modes."""

    def test_uniform_unnorm(self):
        """All ones gives 1/4 everywhere."""
        r = normalize_cross_graph(np.ones((2, 2)), NormMode.UNNORM)
        np.testing.assert_allclose(r.r, np.full((2, 2), 0.25))

    def test_diagonal_unnorm(self):
        """Mass follows the diagonal."""
        r = normalize_cross_graph(np.array([[2.0, 0.0], [0.0, 2.0]]), "unnorm")
        np.testing.assert_allclose(r.r, [[0.5, 0.0], [0.0, 0.5]])

    def test_norm_mode(self):
        """W=[[1,1],[0,1]] with norm divides by sqrt row and column sums."""
        r = normalize_cross_graph(sp.csr_matrix([[1.0, 1.0], [0.0, 1.0]]), NormMode.NORM)
        transformed = np.array([[1 / np.sqrt(2), 0.5], [0.0, 1 / np.sqrt(2)]])
        np.testing.assert_allclose(r.r, transformed / transformed.sum(), atol=1e-12)
        np.testing.assert_allclose(r.r, [[0.36939, 0.26120], [0.0, 0.36939]], atol=1e-5)

    def test_pmi_mode(self):
        """pmi divides by the plain row and column sums."""
        w = np.array([[1.0, 1.0], [0.0, 1.0]])
        r = normalize_cross_graph(w, NormMode.PMI)
        transformed = np.array([[0.5, 0.25], [0.0, 0.5]])
        np.testing.assert_allclose(r.r, transformed / transformed.sum(), atol=1e-12)

    def test_isolated_item_gets_no_mass(self):
        """Zero rows stay zero under norm and pmi."""
        w = np.array([[1.0, 2.0], [0.0, 0.0], [3.0, 0.0]])
        for mode in NormMode:
            r = normalize_cross_graph(w, mode)
            assert np.all(r.r[1] == 0)
            assert r.r.sum() == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("mode", list(NormMode))
    def test_scale_invariance(self, rng, mode):
        """R(cW) equals R(W) for c > 0."""
        w = rng.uniform(size=(5, 4)) * (rng.uniform(size=(5, 4)) > 0.4)
        w[0, 0] = 1.0
        np.testing.assert_allclose(normalize_cross_graph(7.5 * w, mode).r, normalize_cross_graph(w, mode).r, atol=1e-12)

    @pytest.mark.parametrize("mode", [NormMode.NORM, NormMode.PMI])
    def test_symmetric_input_gives_symmetric_r(self, rng, mode):
        """Square symmetric W keeps its symmetry."""
        w = rng.uniform(size=(4, 4))
        w = w + w.T
        r = normalize_cross_graph(w, mode).r
        np.testing.assert_allclose(r, r.T, atol=1e-15)

    def test_all_zero(self):
        """No mass to normalize."""
        with pytest.raises(AllZeroCrossGraphError):
            normalize_cross_graph(np.zeros((2, 3)))

    def test_negative(self):
        """Negative weights are rejected with their index."""
        with pytest.raises(NegativeWeightError) as excinfo:
            normalize_cross_graph(np.array([[1.0, 0.0], [0.0, -1.0]]))
        assert (excinfo.value.row, excinfo.value.col) == (1, 1)


class TestAdaptiveBetas:
    """adaptive_betas()."""

    def test_equal_counts(self):
        """n1 = n2 = 1 weights all blocks equally."""
        assert adaptive_betas(1, 1).as_tuple() == pytest.approx((1 / 3, 1 / 3, 1 / 3))

    def test_image_tag_counts(self):
        """2500 images and 85 tags."""
        betas = adaptive_betas(2500, 85)
        assert betas.beta1 == pytest.approx(0.966038, abs=1e-6)
        assert betas.beta2 == pytest.approx(0.0011168, abs=1e-7)
        assert betas.beta12 == pytest.approx(2500 * 85 / (2500**2 + 85**2 + 2500 * 85), rel=1e-12)

    def test_drop_domain2(self):
        """With domain 2 dropped, beta1 = n1 / (n1 + n2)."""
        betas = adaptive_betas(1000, 613, drop_domain2=True)
        assert betas.beta1 == pytest.approx(1000 / 1613, abs=1e-12)
        assert betas.beta12 == pytest.approx(613 / 1613, abs=1e-12)
        assert betas.beta2 == 0.0


class TestAssembleAugmented:
    """assemble_augmented() and single_domain_relation()."""

    def test_uniform_quarter_blocks(self):
        """P1 = P2 with 1/4 off-diagonal entries, R uniform 1/4."""
        p = SnGraph(probs=np.array([[0.0, 0.25], [0.25, 0.0]]), bandwidths=np.ones(2))
        r = CrossRelation(r=np.full((2, 2), 0.25))
        p_tilde = assemble_augmented(p, p, r, BetaWeights(1, 1, 1)).p_tilde
        assert p_tilde[0, 1] == pytest.approx(1 / 12)
        assert p_tilde[0, 2] == pytest.approx(1 / 24)
        assert p_tilde[3, 2] == pytest.approx(1 / 12)

    def test_absent_graph_with_zero_beta(self, rng):
        """beta2 = 0 leaves the bottom-right block empty and the total at 1."""
        p1 = _random_graph(rng, 5)
        r = normalize_cross_graph(rng.uniform(size=(5, 3)))
        relation = assemble_augmented(p1, None, r, BetaWeights(1, 0, 1))
        assert np.all(relation.p_tilde[5:, 5:] == 0)
        assert relation.p_tilde.sum() == pytest.approx(1.0, abs=1e-10)

    def test_absent_graph_with_positive_beta(self, rng):
        """A missing graph cannot carry weight."""
        r = normalize_cross_graph(rng.uniform(size=(5, 3)))
        with pytest.raises(MissingGraphWithPositiveBetaError):
            assemble_augmented(_random_graph(rng, 5), None, r, BetaWeights(1, 1, 1))

    def test_dimension_mismatch(self, rng):
        """Graph sizes must agree with R."""
        r = normalize_cross_graph(rng.uniform(size=(5, 3)))
        with pytest.raises(DimensionMismatchError):
            assemble_augmented(_random_graph(rng, 4), _random_graph(rng, 3), r, BetaWeights(1, 1, 1))

    def test_random_relations_are_valid(self, rng):
        """Symmetric, nonnegative, zero diagonal and unit mass on random inputs."""
        for _ in range(100):
            n1 = int(rng.integers(4, 12))
            n2 = int(rng.integers(4, 12))
            w = rng.uniform(size=(n1, n2)) * (rng.uniform(size=(n1, n2)) > 0.5)
            w[0, 0] = 1.0
            mode = list(NormMode)[int(rng.integers(3))]
            betas = BetaWeights(*rng.uniform(0.01, 1.0, size=3))
            p1 = _random_graph(rng, n1)
            p2 = _random_graph(rng, n2)
            relation = assemble_augmented(p1, p2, normalize_cross_graph(w, mode), betas)
            p_tilde = relation.p_tilde
            np.testing.assert_array_equal(p_tilde, p_tilde.T)
            assert np.all(p_tilde >= 0)
            assert np.all(np.diag(p_tilde) == 0)
            assert p_tilde.sum() == pytest.approx(1.0, abs=1e-10)
            # block oracle
            np.testing.assert_allclose(p_tilde[:n1, n1:], betas.beta12 / 2 * normalize_cross_graph(w, mode).r)
            np.testing.assert_allclose(p_tilde[:n1, :n1], betas.beta1 * p1.probs)

    def test_single_domain(self, rng):
        """One domain alone is its own SN graph."""
        p1 = _random_graph(rng, 6)
        relation = single_domain_relation(p1)
        assert relation.n2 == 0
        np.testing.assert_array_equal(relation.p_tilde, p1.probs)
