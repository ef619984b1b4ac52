"""Exception taxonomy shared across the package.

InputError and its subclasses map to CLI exit code 2 (usage/input problems);
everything else is an internal error (exit code 1).
"""


class InputError(ValueError):
    """Malformed or out-of-range input supplied by the caller."""


class PreconditionError(InputError):
    """A documented operation precondition does not hold."""


class UnsupportedDimensionError(InputError):
    """Vertex enumeration requested above the supported dimension."""


class ResourceLimitError(InputError):
    """Requested computation exceeds a configured resource cap."""


class InfeasibleRelationsError(InputError):
    """Rejection sampling could not satisfy the supplied atom relations."""


class NumericalConsistencyError(ArithmeticError):
    """A quantity violated a tolerance that separates rounding from bugs."""
