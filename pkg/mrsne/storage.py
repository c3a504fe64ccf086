"""Text file formats for matrices, cross graphs, embeddings and dataset manifests.

Formats (0-based indices, space-separated, one record per line):

  matrix      "rows cols" header, then one line of `cols` floats per row
  cross graph "i j w" with w > 0, no duplicate (i, j)
  embedding   "domain index c1 ... cK", domain in {1, 2}
  labels      one display string per line

Floats are written with 17 significant digits so a save/load pair is exact.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .const import DOMAIN_1, DOMAIN_2
from .errors import (
    DimensionMismatchError,
    DuplicateEntryError,
    FormatError,
    IndexOutOfRangeError,
    NegativeWeightError,
    NonPositiveWeightError,
    ParseError,
)
from .models import Embedding, MultimodalDataset

_LOGGER = logging.getLogger(__name__)

MANIFEST_KEYS = ("domain1", "domain2", "cross_graph", "labels1", "labels2")


def _format_float(value: float) -> str:
    return format(float(value), ".17g")


def _read_lines(path: Path) -> list[str]:
    """File lines without the trailing blank ones."""
    lines = path.read_text(encoding="utf-8").splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def _parse_int(token: str, path: Path, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError as err:
        raise ParseError(str(path), line, f"{what} {token!r} is not an integer") from err


def _parse_float(token: str, path: Path, line: int) -> float:
    try:
        value = float(token)
    except ValueError as err:
        raise ParseError(str(path), line, f"{token!r} is not a number") from err
    if not np.isfinite(value):
        raise ParseError(str(path), line, f"{token!r} is not finite")
    return value


# ─── Dense matrices ──────────────────────────────────────────────────


def load_matrix(path: str | Path) -> np.ndarray:
    """Read a dense matrix written by save_matrix."""
    path = Path(path)
    lines = _read_lines(path)
    if not lines:
        raise ParseError(str(path), 1, "missing 'rows cols' header")
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError(str(path), 1, "header must be 'rows cols'")
    rows = _parse_int(header[0], path, 1, "row count")
    cols = _parse_int(header[1], path, 1, "column count")
    if rows < 0 or cols < 1:
        raise ParseError(str(path), 1, f"invalid shape {rows} x {cols}")

    body = lines[1:]
    if len(body) != rows:
        raise DimensionMismatchError(f"{path}: header declares {rows} rows, file has {len(body)}")
    matrix = np.empty((rows, cols), dtype=np.float64)
    for offset, text in enumerate(body):
        line_no = offset + 2
        tokens = text.split()
        if len(tokens) != cols:
            raise ParseError(str(path), line_no, f"expected {cols} values, got {len(tokens)}")
        matrix[offset] = [_parse_float(tok, path, line_no) for tok in tokens]
    return matrix


def save_matrix(matrix: np.ndarray, path: str | Path) -> None:
    """Write a dense matrix in the 'rows cols' text format."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got {matrix.ndim} dimensions")
    lines = [f"{matrix.shape[0]} {matrix.shape[1]}"]
    lines.extend(" ".join(_format_float(v) for v in row) for row in matrix)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# ─── Cross graph ─────────────────────────────────────────────────────


def load_cross_graph(path: str | Path, n1: int, n2: int) -> sp.csr_matrix:
    """Read an 'i j w' triplet file into an n1 x n2 sparse matrix."""
    path = Path(path)
    rows: list[int] = []
    cols: list[int] = []
    weights: list[float] = []
    seen: set[tuple[int, int]] = set()

    for line_no, text in enumerate(_read_lines(path), start=1):
        tokens = text.split()
        if not tokens:
            continue
        if len(tokens) != 3:
            raise ParseError(str(path), line_no, "expected 'i j w'")
        i = _parse_int(tokens[0], path, line_no, "row index")
        j = _parse_int(tokens[1], path, line_no, "column index")
        w = _parse_float(tokens[2], path, line_no)
        if not (0 <= i < n1 and 0 <= j < n2):
            raise IndexOutOfRangeError(str(path), line_no, i, j)
        if (i, j) in seen:
            raise DuplicateEntryError(str(path), line_no, i, j)
        if w <= 0:
            raise NonPositiveWeightError(str(path), line_no, w)
        seen.add((i, j))
        rows.append(i)
        cols.append(j)
        weights.append(w)

    return sp.csr_matrix((weights, (rows, cols)), shape=(n1, n2), dtype=np.float64)


def save_cross_graph(graph: sp.spmatrix | np.ndarray, path: str | Path) -> None:
    """Write the positive entries of W as 'i j w' lines in row-major order."""
    coo = sp.coo_matrix(graph, dtype=np.float64)
    coo.sum_duplicates()
    if (coo.data < 0).any():
        k = int(np.argmax(coo.data < 0))
        raise NegativeWeightError(int(coo.row[k]), int(coo.col[k]))
    order = np.lexsort((coo.col, coo.row))
    lines = [
        f"{int(coo.row[k])} {int(coo.col[k])} {_format_float(coo.data[k])}"
        for k in order
        if coo.data[k] > 0
    ]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


# ─── Embeddings ──────────────────────────────────────────────────────


def save_embedding(embedding: Embedding, path: str | Path) -> None:
    """Write one 'domain index coords...' line per row."""
    lines = []
    for row, coords in enumerate(embedding.coords):
        domain, index = embedding.domain_of_row(row)
        values = " ".join(_format_float(v) for v in coords)
        lines.append(f"{domain} {index} {values}")
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def load_embedding(path: str | Path) -> Embedding:
    """Read an embedding file; every domain's indices must cover 0..n-1 once."""
    path = Path(path)
    records: dict[int, dict[int, list[float]]] = {DOMAIN_1: {}, DOMAIN_2: {}}
    dim: int | None = None

    for line_no, text in enumerate(_read_lines(path), start=1):
        tokens = text.split()
        if len(tokens) < 3:
            raise ParseError(str(path), line_no, "expected 'domain index coords...'")
        if tokens[0] not in ("1", "2"):
            raise ParseError(str(path), line_no, f"domain must be 1 or 2, got {tokens[0]!r}")
        domain = int(tokens[0])
        index = _parse_int(tokens[1], path, line_no, "item index")
        coords = [_parse_float(tok, path, line_no) for tok in tokens[2:]]
        if dim is None:
            dim = len(coords)
        elif len(coords) != dim:
            raise ParseError(str(path), line_no, f"expected {dim} coordinates, got {len(coords)}")
        if index < 0 or index in records[domain]:
            raise ParseError(str(path), line_no, f"invalid or repeated index {index} in domain {domain}")
        records[domain][index] = coords

    if dim is None:
        raise ParseError(str(path), 1, "empty embedding file")
    for domain, items in records.items():
        if items and max(items) != len(items) - 1:
            raise ParseError(str(path), 0, f"domain {domain} indices are not contiguous from 0")

    ordered = [records[DOMAIN_1][i] for i in range(len(records[DOMAIN_1]))]
    ordered += [records[DOMAIN_2][j] for j in range(len(records[DOMAIN_2]))]
    return Embedding(
        coords=np.array(ordered, dtype=np.float64),
        n1=len(records[DOMAIN_1]),
        n2=len(records[DOMAIN_2]),
    )


# ─── Labels and manifests ────────────────────────────────────────────


def load_labels(path: str | Path, expected: int | None = None) -> list[str]:
    """One label per line, blank ones included; the count must match `expected` when given."""
    labels = Path(path).read_text(encoding="utf-8").split("\n")
    if labels[-1] == "":
        labels.pop()
    if expected is not None and len(labels) != expected:
        raise DimensionMismatchError(f"{path}: {len(labels)} labels for {expected} items")
    return labels


def save_labels(labels: list[str], path: str | Path) -> None:
    Path(path).write_text("".join(f"{label}\n" for label in labels), encoding="utf-8")


@dataclass(frozen=True)
class DatasetManifest:
    """Locations of a dataset's files, already resolved to absolute paths."""

    domain1: Path
    domain2: Path | None = None
    cross_graph: Path | None = None
    labels1: Path | None = None
    labels2: Path | None = None

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path) -> DatasetManifest:
        """Resolve manifest entries relative to base_dir."""
        unknown = set(data) - set(MANIFEST_KEYS)
        if unknown:
            raise FormatError(f"unknown manifest keys: {', '.join(sorted(unknown))}")
        if "domain1" not in data:
            raise FormatError("manifest must name a 'domain1' matrix")
        if ("domain2" in data) != ("cross_graph" in data):
            raise FormatError("manifest needs 'domain2' and 'cross_graph' together")
        resolved = {key: (base_dir / value).resolve() for key, value in data.items() if value is not None}
        manifest = cls(**resolved)
        for key in MANIFEST_KEYS:
            target = getattr(manifest, key)
            if target is not None and not target.is_file():
                raise FileNotFoundError(f"manifest entry {key!r} points to a missing file: {target}")
        return manifest

    def to_dict(self, base_dir: Path) -> dict[str, str]:
        """Entries as paths relative to base_dir where possible."""
        result = {}
        for key in MANIFEST_KEYS:
            target = getattr(self, key)
            if target is None:
                continue
            try:
                result[key] = target.relative_to(base_dir.resolve()).as_posix()
            except ValueError:
                result[key] = str(target)
        return result


def load_manifest(path: str | Path) -> DatasetManifest:
    """Parse a JSON dataset manifest."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ParseError(str(path), err.lineno, err.msg) from err
    if not isinstance(data, dict):
        raise ParseError(str(path), 1, "manifest must be a JSON object")
    return DatasetManifest.from_dict(data, path.parent.resolve())


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    path = Path(path)
    payload = manifest.to_dict(path.parent)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_dataset(manifest: DatasetManifest) -> MultimodalDataset:
    """Read every matrix and graph a manifest names."""
    domain1 = load_matrix(manifest.domain1)
    domain2 = None
    graph = None
    if manifest.domain2 is not None and manifest.cross_graph is not None:
        domain2 = load_matrix(manifest.domain2)
        graph = load_cross_graph(manifest.cross_graph, domain1.shape[0], domain2.shape[0])
    _LOGGER.info(
        "Loaded dataset: n1=%d, n2=%d, links=%d",
        domain1.shape[0],
        0 if domain2 is None else domain2.shape[0],
        0 if graph is None else graph.nnz,
    )
    return MultimodalDataset(domain1=domain1, domain2=domain2, cross_graph=graph)


def load_manifest_labels(
    manifest: DatasetManifest, n1: int, n2: int
) -> tuple[list[str] | None, list[str] | None]:
    """Label lists for both domains, or None where the manifest has none."""
    labels1 = load_labels(manifest.labels1, n1) if manifest.labels1 is not None else None
    labels2 = load_labels(manifest.labels2, n2) if manifest.labels2 is not None else None
    return labels1, labels2
