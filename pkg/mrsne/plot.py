"""Static SVG scatter plots of two-domain embeddings.

Domain-1 items are drawn as circles and domain-2 items as green text
labels. Output depends only on the inputs, so identical runs give
byte-identical files.
"""

from __future__ import annotations

import logging
import xml.etree.ElementTree as ET
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .const import (
    DEFAULT_SEED,
    SVG_FONT_SIZE,
    SVG_LABEL_COLOR,
    SVG_MARGIN,
    SVG_POINT_COLOR,
    SVG_POINT_RADIUS,
    SVG_SIZE,
)
from .errors import ConfigError, DimensionMismatchError, UnsupportedDimensionError
from .models import Embedding

_LOGGER = logging.getLogger(__name__)

SVG_NAMESPACE = "http://www.w3.org/2000/svg"


@dataclass(frozen=True)
class ItemLabels:
    """Display strings per domain; None falls back to the item index."""

    domain1: Sequence[str] | None = None
    domain2: Sequence[str] | None = None


def viewport_transform(coords: np.ndarray, size: int = SVG_SIZE, margin: float = SVG_MARGIN) -> np.ndarray:
    """Map 2-D coords into [margin, 1 - margin] * size with one scale for both axes.

    The SVG y axis points down, so y is flipped. Degenerate extents are centred.
    """
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    span = float(np.max(hi - lo))
    inner = size * (1.0 - 2.0 * margin)
    scale = inner / span if span > 0 else 0.0
    centre = (lo + hi) / 2.0
    mapped = (coords - centre) * scale + size / 2.0
    mapped[:, 1] = size - mapped[:, 1]
    return mapped


def select_domain1(n1: int, limit: int | None, seed: int = DEFAULT_SEED) -> np.ndarray:
    """A seeded random subset of domain-1 indices, in ascending order."""
    if limit is None or limit >= n1:
        return np.arange(n1)
    if limit < 0:
        raise ConfigError(f"max_domain1 must be >= 0, got {limit}")
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(n1, size=limit, replace=False))


def select_domain2(n2: int, limit: int | None, cross_graph: sp.spmatrix | None) -> np.ndarray:
    """The `limit` most linked domain-2 indices (ties by index), in ascending order."""
    if limit is None or limit >= n2:
        return np.arange(n2)
    if limit < 0:
        raise ConfigError(f"max_domain2 must be >= 0, got {limit}")
    if cross_graph is None:
        raise ConfigError("choosing the most linked domain-2 items needs the cross graph")
    degree = np.asarray((sp.csr_matrix(cross_graph) > 0).sum(axis=0)).ravel()
    if degree.size != n2:
        raise DimensionMismatchError(f"cross graph has {degree.size} columns, embedding has {n2} domain-2 rows")
    order = np.lexsort((np.arange(n2), -degree))
    return np.sort(order[:limit])


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def build_scatter_svg(
    embedding: Embedding,
    labels: ItemLabels | None = None,
    max_domain1: int | None = None,
    max_domain2: int | None = None,
    cross_graph: sp.spmatrix | None = None,
    seed: int = DEFAULT_SEED,
) -> ET.Element:
    """Build the SVG element tree for a 2-D embedding."""
    if embedding.dim != 2:
        raise UnsupportedDimensionError(embedding.dim)
    labels = labels or ItemLabels()
    for name, values, n in (("domain-1", labels.domain1, embedding.n1), ("domain-2", labels.domain2, embedding.n2)):
        if values is not None and len(values) != n:
            raise DimensionMismatchError(f"{len(values)} {name} labels for {n} items")

    points = viewport_transform(embedding.coords)
    shown1 = select_domain1(embedding.n1, max_domain1, seed)
    shown2 = select_domain2(embedding.n2, max_domain2, cross_graph)

    root = ET.Element(
        "svg",
        {
            "xmlns": SVG_NAMESPACE,
            "width": str(SVG_SIZE),
            "height": str(SVG_SIZE),
            "viewBox": f"0 0 {SVG_SIZE} {SVG_SIZE}",
        },
    )
    ET.SubElement(root, "rect", {"width": "100%", "height": "100%", "fill": "white"})

    group1 = ET.SubElement(root, "g", {"id": "domain1", "fill": SVG_POINT_COLOR})
    for i in shown1:
        x, y = points[int(i)]
        circle = ET.SubElement(group1, "circle", {"cx": _fmt(x), "cy": _fmt(y), "r": str(SVG_POINT_RADIUS)})
        if labels.domain1 is not None:
            ET.SubElement(circle, "title").text = labels.domain1[int(i)]

    group2 = ET.SubElement(
        root,
        "g",
        {
            "id": "domain2",
            "fill": SVG_LABEL_COLOR,
            "font-family": "sans-serif",
            "font-size": str(SVG_FONT_SIZE),
            "text-anchor": "middle",
        },
    )
    for j in shown2:
        x, y = points[embedding.n1 + int(j)]
        text = ET.SubElement(group2, "text", {"x": _fmt(x), "y": _fmt(y)})
        text.text = labels.domain2[int(j)] if labels.domain2 is not None else str(int(j))

    return root


def emit_scatter_svg(
    embedding: Embedding,
    labels: ItemLabels | None,
    path: str | Path,
    max_domain1: int | None = None,
    max_domain2: int | None = None,
    cross_graph: sp.spmatrix | None = None,
    seed: int = DEFAULT_SEED,
) -> None:
    """Write the scatter plot of a 2-D embedding to path."""
    root = build_scatter_svg(embedding, labels, max_domain1, max_domain2, cross_graph, seed)
    tree = ET.ElementTree(root)
    ET.indent(tree)
    tree.write(Path(path), encoding="utf-8", xml_declaration=True)
    _LOGGER.info("Wrote scatter plot to %s", path)
