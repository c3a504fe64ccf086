"""Tests for SVG scatter output."""

import xml.etree.ElementTree as ET

import numpy as np
import pytest
import scipy.sparse as sp

from mrsne.errors import ConfigError, DimensionMismatchError, UnsupportedDimensionError
from mrsne.models import Embedding
from mrsne.plot import (
    ItemLabels,
    emit_scatter_svg,
    select_domain1,
    select_domain2,
    viewport_transform,
)

from .conftest import toy_cross_graph

NS = "{http://www.w3.org/2000/svg}"


def _parse(path):
    return ET.parse(path).getroot()


def test_two_points(tmp_path):
    """One item per domain gives one circle and one text label."""
    embedding = Embedding(coords=np.array([[0.0, 0.0], [1.0, 1.0]]), n1=1, n2=1)
    path = tmp_path / "plot.svg"
    emit_scatter_svg(embedding, ItemLabels(domain2=["sunset"]), path)

    root = _parse(path)
    assert root.tag == f"{NS}svg"
    circles = root.findall(f".//{NS}circle")
    texts = root.findall(f".//{NS}text")
    assert len(circles) == 1
    assert len(texts) == 1
    assert texts[0].text == "sunset"


def test_index_fallback_and_titles(tmp_path, toy_embedding):
    """Domain-2 text falls back to the index; domain-1 labels become titles."""
    path = tmp_path / "plot.svg"
    labels = ItemLabels(domain1=[f"img{i}" for i in range(8)])
    emit_scatter_svg(toy_embedding, labels, path)

    root = _parse(path)
    assert [t.text for t in root.findall(f".//{NS}text")] == ["0", "1", "2", "3"]
    assert [t.text for t in root.findall(f".//{NS}circle/{NS}title")] == [f"img{i}" for i in range(8)]


def test_rejects_three_dimensions(tmp_path, rng):
    """K = 3 has no scatter plot."""
    embedding = Embedding(coords=rng.normal(size=(4, 3)), n1=2, n2=2)
    with pytest.raises(UnsupportedDimensionError):
        emit_scatter_svg(embedding, None, tmp_path / "plot.svg")


def test_label_count_must_match(tmp_path, toy_embedding):
    """Labels are one per item."""
    with pytest.raises(DimensionMismatchError):
        emit_scatter_svg(toy_embedding, ItemLabels(domain2=["a"]), tmp_path / "plot.svg")


def test_byte_identical_output(tmp_path, rng):
    """The same inputs give the same bytes."""
    embedding = Embedding(coords=rng.normal(size=(50, 2)), n1=40, n2=10)
    first = tmp_path / "a.svg"
    second = tmp_path / "b.svg"
    emit_scatter_svg(embedding, None, first, max_domain1=15, seed=9)
    emit_scatter_svg(embedding, None, second, max_domain1=15, seed=9)
    assert first.read_bytes() == second.read_bytes()


def test_subsets_are_applied(tmp_path, toy_embedding):
    """Only the selected items are drawn."""
    path = tmp_path / "plot.svg"
    emit_scatter_svg(toy_embedding, None, path, max_domain1=3, max_domain2=2, cross_graph=toy_cross_graph())
    root = _parse(path)
    assert len(root.findall(f".//{NS}circle")) == 3
    assert len(root.findall(f".//{NS}text")) == 2


class TestViewport:
    """viewport_transform()."""

    def test_points_inside_margin(self, rng):
        """Everything lands within the margin of the canvas."""
        mapped = viewport_transform(rng.normal(size=(30, 2)) * 50, size=800, margin=0.05)
        assert mapped.min() >= 40 - 1e-9
        assert mapped.max() <= 760 + 1e-9

    def test_aspect_ratio_kept(self):
        """Both axes share one scale and y points down."""
        mapped = viewport_transform(np.array([[0.0, 0.0], [2.0, 1.0]]), size=100, margin=0.0)
        np.testing.assert_allclose(mapped, [[0.0, 75.0], [100.0, 25.0]])

    def test_single_location(self):
        """Coinciding points are centred."""
        mapped = viewport_transform(np.ones((3, 2)), size=100)
        np.testing.assert_allclose(mapped, 50.0)


class TestSelection:
    """select_domain1() and select_domain2()."""

    def test_domain1_seeded(self):
        """The subset is sorted, unique and reproducible."""
        chosen = select_domain1(100, 10, seed=4)
        assert chosen.size == 10
        assert np.all(np.diff(chosen) > 0)
        np.testing.assert_array_equal(chosen, select_domain1(100, 10, seed=4))

    def test_domain1_no_limit(self):
        """No limit keeps every item."""
        np.testing.assert_array_equal(select_domain1(5, None), np.arange(5))

    def test_domain2_most_linked(self):
        """Columns with the most links win, ties by lower index."""
        w = sp.csr_matrix(np.array([[1, 0, 1, 1], [0, 0, 1, 1], [1, 0, 0, 1]], dtype=float))
        np.testing.assert_array_equal(select_domain2(4, 2, w), [0, 3])
        np.testing.assert_array_equal(select_domain2(4, 3, w), [0, 2, 3])

    def test_domain2_needs_graph(self):
        """Degree-based selection needs the graph."""
        with pytest.raises(ConfigError):
            select_domain2(4, 2, None)
