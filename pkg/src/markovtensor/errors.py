"""Exception hierarchy shared by all modules.

``ValidationError`` covers bad input (CLI exit code 1); ``NumericalError``
covers singular systems and failed internal cross-checks (exit code 2).
"""

from __future__ import annotations


class MarkovTensorError(Exception):
    """Base class. ``module`` and ``hint`` are surfaced by the CLI."""

    module = "markovtensor"
    hint = ""

    def __init__(self, message: str, *, module: str | None = None, hint: str | None = None):
        super().__init__(message)
        if module is not None:
            self.module = module
        if hint is not None:
            self.hint = hint


class ValidationError(MarkovTensorError, ValueError):
    pass


class GraphFormatError(ValidationError):
    """Malformed edge-list line."""

    module = "graph"

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class NotStronglyConnectedError(ValidationError):
    module = "graph"
    hint = "use target-set metrics (fundamental_matrix with a target set) instead"


class UncoveredRecurrentClassError(ValidationError):
    module = "fundamental"
    hint = "add at least one node of every recurrent class to the target set"

    def __init__(self, message: str, uncovered: list[int]):
        super().__init__(message)
        self.uncovered = uncovered


class FailedEndpointError(ValidationError):
    module = "reachability"
    hint = "queries presume both endpoints are alive"


class NumericalError(MarkovTensorError, ArithmeticError):
    pass


class SingularMatrixError(NumericalError):
    module = "linalg"

    def __init__(self, message: str, pivot: int | None = None):
        super().__init__(message)
        self.pivot = pivot


class ConsistencyError(NumericalError):
    """Two routes that must agree did not."""
