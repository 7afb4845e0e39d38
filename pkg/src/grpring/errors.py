"""Error classes shared by every layer; the CLI maps each to an exit code."""


class GrpRingError(Exception):
    exit_code = 1


class InputError(GrpRingError, ValueError):
    """Malformed or ill-typed input."""

    exit_code = 2


class UnsupportedError(GrpRingError):
    """Input is valid but outside what can be computed within the bounds."""

    exit_code = 3


class InvariantError(GrpRingError):
    """A computed object failed an internal consistency check."""

    exit_code = 4
