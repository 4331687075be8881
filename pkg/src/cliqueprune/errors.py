"""Exception types shared across the package."""


class GraphParseError(ValueError):
    """A text line could not be parsed; carries the 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GraphFormatError(ValueError):
    """Structurally invalid input, e.g. a DIMACS header inconsistent with its body."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DegenerateGraphError(ValueError):
    """The operation is undefined on this graph (e.g. no edges)."""


class DegenerateLabelsError(ValueError):
    """A training instance has only one class and cannot be balanced."""


class MultistageFitError(RuntimeError):
    """Every corpus instance became degenerate at some pruning stage."""

    def __init__(self, stage, message=None):
        super().__init__(message or f"no usable training rows at stage {stage}")
        self.stage = stage


class ConfigError(ValueError):
    """Invalid pruning/experiment configuration."""


class SolverTimeout(RuntimeError):
    """The exact search exceeded its time limit.

    `best_lower_bound` is the size of the largest clique seen before the
    deadline; no clique list is available.
    """

    def __init__(self, best_lower_bound):
        super().__init__(
            f"time limit exceeded (best clique size seen: {best_lower_bound})"
        )
        self.best_lower_bound = best_lower_bound
