"""Exception types shared across the package.

The CLI maps these onto exit codes: corpus format/integrity problems are
"malformed corpus" (exit 3), everything below AnalysisError is an
"analysis error" (exit 4).
"""


class CitescopeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidNameError(CitescopeError):
    """A raw author name cannot be normalized (empty or content-free)."""


class CorpusFormatError(CitescopeError):
    """The input document is not valid corpus interchange JSON."""


class CorpusIntegrityError(CitescopeError):
    """The document parses but violates a corpus invariant.

    Covers dangling identifiers, duplicate ids, duplicate or degenerate
    citation edges, and field-level validation failures.
    """


class AnalysisError(CitescopeError):
    """Base class for errors arising during analysis of a valid corpus."""


class UndefinedCohortError(AnalysisError):
    """A researcher owns no publications, so first-publication year is undefined."""


class UndefinedProportionError(AnalysisError):
    """A researcher has zero incoming citations, so the proportion is undefined."""


class UndefinedCovariateError(AnalysisError):
    """A researcher has no cited publications, so mean authors per cited paper is undefined."""


class RankDeficiencyError(AnalysisError):
    """The weighted design matrix is singular or numerically rank deficient."""

    def __init__(self, message: str, columns: list[str] | None = None):
        super().__init__(message)
        self.columns = columns or []


class GeneratorError(CitescopeError):
    """The synthetic-corpus parameters are infeasible."""
