"""Exceptions for cyclefree."""


class CycleFreeError(Exception):
    """Generic cyclefree exception."""


class GraphFormatError(CycleFreeError):
    """Edge list text could not be turned into a graph."""

    def __init__(self, message: str, line: int | None = None) -> None:
        """Initialize with the offending 1-based line number, if known."""
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedEdgeListError(GraphFormatError):
    """A line of the edge list is not of the expected shape."""


class VertexRangeError(GraphFormatError):
    """An edge refers to a vertex id outside 0..n-1."""


class SelfLoopError(GraphFormatError):
    """An edge joins a vertex to itself."""


class DuplicateEdgeError(GraphFormatError):
    """An edge appears twice, in either orientation."""


class PatternError(CycleFreeError):
    """Invalid pattern graph."""


class SizeLimitError(CycleFreeError):
    """An exhaustive routine was called above its size cap."""


class ParameterError(CycleFreeError):
    """Invalid tester or experiment parameters."""


class QueryError(CycleFreeError):
    """A query violated the access-model contract."""


class TesterAbort(CycleFreeError):
    """A tester run was cut short; the run ends with Accept."""


class QueryBudgetExhaustedError(TesterAbort):
    """The query budget of a session is exhausted."""


class SubdivisionAbortError(TesterAbort):
    """The subdivided oracle sampled an edge it had already revealed."""


class InfeasibleSpecError(CycleFreeError):
    """A generator cannot realize the requested instance."""


class GenerationRepairError(InfeasibleSpecError):
    """Switching repair ran out of attempts."""


class NotTripartiteError(CycleFreeError):
    """The base graph of the subdivision is not tripartite."""


class UnsupportedSchemaError(CycleFreeError):
    """A payload was written with an unsupported schema version."""


class InvalidCertificateError(CycleFreeError):
    """A claimed set of edge-disjoint cycles is not valid for the graph."""
