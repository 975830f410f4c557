"""Exception hierarchy shared by the solver modules and the CLI."""

from __future__ import annotations


class SteinerError(Exception):
    """Base class. ``code`` is the machine-readable tag used by the CLI."""

    code = "steiner_error"

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context


class DegenerateEdge(SteinerError):
    code = "degenerate_edge"


class ParallelEdges(SteinerError):
    code = "parallel_edges"


class InfeasibleWeights(SteinerError):
    code = "infeasible_weights"


class NoConvergence(SteinerError):
    """Iteration cap reached. ``trace`` holds the iterates for diagnosis."""

    code = "no_convergence"

    def __init__(self, message: str, trace=None, **context):
        super().__init__(message, **context)
        self.trace = trace if trace is not None else []


class NodeOffSegment(SteinerError):
    code = "node_off_segment"


class UndefinedTwist(SteinerError):
    code = "undefined_twist"


class DegenerateConfiguration(SteinerError):
    code = "degenerate_configuration"


class InconsistentSolution(SteinerError):
    code = "inconsistent_solution"


class InputError(SteinerError):
    code = "invalid_input"
