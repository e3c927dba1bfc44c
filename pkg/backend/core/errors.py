"""
Error hierarchy shared by the solver, the oracle and the CLI.

The CLI maps these onto exit codes:
    InputError   -> 3
    SolverError  -> 2
    OSError      -> 4
"""

from __future__ import annotations

from typing import Any, List, Optional


class InputError(ValueError):
    """Malformed or out-of-range user input."""


class ItineraryError(InputError):
    """An itinerary violates one or more of its invariants."""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InsufficientDataError(ValueError):
    """A diagnostic was asked for on a trace that cannot support it."""


class SolverError(RuntimeError):
    """A numerical procedure failed to produce a result."""

    def __init__(self, message: str, trace: Optional[Any] = None):
        super().__init__(message)
        # partial IterationTrace, when the failure happened inside the spider
        self.trace = trace


class DivergenceError(SolverError):
    pass


class DegeneracyError(SolverError):
    pass


class NewtonDivergenceError(SolverError):
    pass


class OrbitEscapeError(SolverError):
    pass


class OrbitNotClosedError(SolverError):
    pass


class AmbiguousAddressError(SolverError):
    pass
