"""Exception hierarchy shared across the package.

Exit-code mapping for the CLI lives on the classes themselves so that
``cli.main`` can translate any library error into the documented process
exit status (2 for bad configuration/input, 3 for numerical failures).
"""

from __future__ import annotations


class BlpError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ConfigurationError(BlpError):
    """Invalid sizes, enums, or otherwise malformed requests."""

    exit_code = 2


class DomainError(ConfigurationError):
    """An argument lies outside the mathematical domain of an operation."""


class EvaluationError(BlpError):
    """A pointwise evaluation produced a non-finite value.

    Carries the offending node so quadrature failures are diagnosable.
    """

    exit_code = 3

    def __init__(self, message: str, node: complex | None = None):
        super().__init__(message if node is None else f"{message} at node {node}")
        self.node = node


class AccuracyError(BlpError):
    """A result failed its internal refinement-stability check."""

    exit_code = 3
