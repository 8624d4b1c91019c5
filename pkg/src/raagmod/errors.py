"""Exception hierarchy.  Each class carries the CLI exit status it maps to."""


class RaagError(Exception):
    exit_code = 1


class InputError(RaagError, ValueError):
    """Malformed or inconsistent user input."""
    exit_code = 1


class PreconditionError(RaagError):
    """Input parses, but an operation's precondition does not hold."""
    exit_code = 2


class UnsupportedCase(PreconditionError):
    """A case the library deliberately does not handle."""
    exit_code = 2


class InvariantError(RaagError, AssertionError):
    """A mathematical invariant failed.  Always a bug or a wrong claim."""
    exit_code = 3


class ResourceError(RaagError):
    """An enumeration or search cap was exceeded."""
    exit_code = 4
