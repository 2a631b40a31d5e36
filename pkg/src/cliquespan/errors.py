"""Exception hierarchy shared across the package."""


class SpannerError(Exception):
    """Base class for all package errors."""


class InputError(SpannerError, ValueError):
    """Malformed or out-of-domain input."""


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceError(SpannerError):
    """A computation would exceed a configured size or enumeration limit."""


class BudgetViolation(SpannerError):
    """A node exceeded the per-round bandwidth of the congested clique."""

    def __init__(self, round_index: int, vertex: int, kind: str):
        self.round_index = round_index
        self.vertex = vertex
        self.kind = kind
        super().__init__(f"round {round_index}: vertex {vertex} violated {kind} budget")


class RoutingAdmissibilityError(SpannerError):
    def __init__(self, vertex: int, kind: str, words: int, limit: int):
        self.vertex = vertex
        self.kind = kind
        self.words = words
        self.limit = limit
        super().__init__(
            f"vertex {vertex} is {kind} of {words} words; routing admits at most {limit}"
        )


class SimulationTimeout(SpannerError):
    pass


class UnsupportedK(InputError):
    pass


class HittingSetFailure(SpannerError):
    """A hitting set left some required set un-hit (randomized backends only)."""

    def __init__(self, missed, stage: str = ""):
        self.missed = sorted(missed)
        self.stage = stage
        head = ", ".join(map(str, self.missed[:5]))
        super().__init__(f"{stage or 'hitting set'} missed {len(self.missed)} set(s): {head}")


class ParameterError(SpannerError, ValueError):
    """Derandomization parameters give an initial estimator of at least 1."""

    def __init__(self, size_term: float, miss_term: float):
        self.size_term = size_term
        self.miss_term = miss_term
        super().__init__(
            f"initial estimator {size_term + miss_term:.6g} >= 1 "
            f"(size term {size_term:.6g}, miss term {miss_term:.6g}); "
            "raise d, lower beta, or raise size_threshold"
        )


class ConsistencyError(SpannerError):
    """An internal invariant from the construction's analysis was violated."""
