"""Exception hierarchy for MR-SNE."""

from __future__ import annotations


class MrsneError(Exception):
    """Base error for the package."""


# ─── Data model ──────────────────────────────────────────────────────


class DataError(MrsneError):
    """Input data violates the multimodal data model."""


class NegativeWeightError(DataError):
    """A cross-graph weight is negative."""

    def __init__(self, row: int, col: int) -> None:
        super().__init__(f"negative cross-graph weight at ({row}, {col})")
        self.row = row
        self.col = col


class EmptyDomainError(DataError):
    """A domain has too few items."""

    def __init__(self, domain: int, count: int, minimum: int) -> None:
        super().__init__(f"domain {domain} has {count} items, at least {minimum} required")
        self.domain = domain
        self.count = count


class NonFiniteValueError(DataError):
    """A NaN or infinity was found."""

    def __init__(self, where: str, index: tuple[int, ...]) -> None:
        super().__init__(f"non-finite value in {where} at {index}")
        self.where = where
        self.index = index


class AllZeroCrossGraphError(DataError):
    """The cross-domain graph carries no mass."""

    def __init__(self) -> None:
        super().__init__("cross-domain graph has no positive weight")


class DimensionMismatchError(DataError):
    """Shapes of related matrices disagree."""


class ShapeMismatchError(DataError):
    """Array shapes passed to a numeric routine disagree."""


class MissingGraphWithPositiveBetaError(DataError):
    """A stochastic neighbor graph is absent although its weight is positive."""

    def __init__(self, domain: int, beta: float) -> None:
        super().__init__(f"domain {domain} graph is absent but its beta is {beta:g}")
        self.domain = domain
        self.beta = beta


# ─── Numerics ────────────────────────────────────────────────────────


class NumericError(MrsneError):
    """A numeric routine cannot produce a valid result."""


class PerplexityUnreachableError(NumericError):
    """The perplexity target cannot be met for a point."""

    def __init__(self, index: int, perplexity: float, achievable: float) -> None:
        super().__init__(
            f"perplexity {perplexity:g} unreachable at point {index}: "
            f"all neighbor distances are equal, perplexity is fixed at {achievable:g}"
        )
        self.index = index
        self.perplexity = perplexity
        self.achievable = achievable
        # Set by the pipeline when it knows which domain the point came from
        self.domain: int | None = None


class DegenerateRowError(NumericError):
    """Every off-diagonal distance of a row is infinite."""

    def __init__(self, index: int) -> None:
        super().__init__(f"row {index} has no finite neighbor distance")
        self.index = index


class ZeroQWithPositivePError(NumericError):
    """Q vanishes on a pair where P has mass."""

    def __init__(self, i: int, j: int) -> None:
        super().__init__(f"q is zero at ({i}, {j}) where p is positive")
        self.i = i
        self.j = j


class DivergedObjectiveError(NumericError):
    """The KL objective became non-finite during optimisation."""

    def __init__(self, iteration: int) -> None:
        super().__init__(f"objective diverged at iteration {iteration}; try a smaller learning rate")
        self.iteration = iteration


class RankDeficientError(NumericError):
    """A regularized covariance is numerically singular."""

    def __init__(self, domain: int) -> None:
        super().__init__(f"covariance of domain {domain} is singular; use a positive regularization")
        self.domain = domain


class DegenerateDomainError(NumericError):
    """All embedded points of a domain coincide."""

    def __init__(self, domain: int) -> None:
        super().__init__(f"domain {domain} embedding has zero variance")
        self.domain = domain


# ─── Evaluation ──────────────────────────────────────────────────────


class EvaluationError(MrsneError):
    """An evaluation metric cannot be computed."""


class KTooLargeError(EvaluationError):
    """More neighbors requested than candidates exist."""

    def __init__(self, k: int, available: int) -> None:
        super().__init__(f"k={k} exceeds the {available} available candidates")
        self.k = k
        self.available = available


class NoPositivesError(EvaluationError):
    """No query has any ground-truth positive."""


# ─── File formats ────────────────────────────────────────────────────


class FormatError(MrsneError):
    """A file does not follow its text format."""


class ParseError(FormatError):
    """A line could not be parsed."""

    def __init__(self, path: str, line: int, reason: str) -> None:
        super().__init__(f"{path}:{line}: {reason}")
        self.path = path
        self.line = line


class IndexOutOfRangeError(FormatError):
    """A cross-graph index lies outside the domain sizes."""

    def __init__(self, path: str, line: int, row: int, col: int) -> None:
        super().__init__(f"{path}:{line}: index ({row}, {col}) out of range")
        self.path = path
        self.line = line


class DuplicateEntryError(FormatError):
    """A cross-graph edge appears twice."""

    def __init__(self, path: str, line: int, row: int, col: int) -> None:
        super().__init__(f"{path}:{line}: duplicate edge ({row}, {col})")
        self.path = path
        self.line = line


class NonPositiveWeightError(FormatError):
    """A cross-graph edge has weight <= 0."""

    def __init__(self, path: str, line: int, weight: float) -> None:
        super().__init__(f"{path}:{line}: edge weight {weight:g} is not positive")
        self.path = path
        self.line = line


class UnsupportedDimensionError(FormatError):
    """The embedding dimension is not supported by the output format."""

    def __init__(self, dim: int) -> None:
        super().__init__(f"scatter plots need K=2, got K={dim}")
        self.dim = dim


# ─── Configuration ───────────────────────────────────────────────────


class ConfigError(MrsneError):
    """Invalid configuration values."""
