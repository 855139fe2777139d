"""Exception types shared across the package.

Everything derives from :class:`ArbiterError` so callers (and the CLI) can
catch one base class. Input-shaped errors also derive from ``ValueError``.
"""


class ArbiterError(Exception):
    """Base class for all package errors."""


class SizeError(ArbiterError, ValueError):
    """Register size, qubit index or bitstring length is out of range."""


class QubitIndexError(ArbiterError, ValueError):
    """Qubit indices collide (duplicate targets, control == target)."""


class GateError(ArbiterError, ValueError):
    """A gate matrix is malformed or not unitary."""


class ParameterError(ArbiterError, ValueError):
    """An angle, probability or configuration value is out of range."""


class PreconditionError(ArbiterError):
    """A register was expected to be cleared but is not."""


class DataError(ArbiterError, ValueError):
    """Supplied data is inconsistent, e.g. a matrix far from any unitary."""


class NoSolutionError(ArbiterError):
    """The searched function has no preimage for the requested target."""


class SearchFailureError(ArbiterError):
    """Every Grover attempt returned a non-solution."""
