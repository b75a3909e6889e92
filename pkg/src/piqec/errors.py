"""Exception types shared across the package."""


class PiqecError(Exception):
    """Base class for all package-specific failures."""


class NotLogicalGateError(PiqecError, ValueError):
    """A transversal rotation does not act as a logical gate on the given code."""


class ConstructionError(PiqecError, RuntimeError):
    """A code construction failed (e.g. no non-negative nullspace vector exists)."""


class ResourceLimitError(PiqecError, RuntimeError):
    """A computation was refused because it exceeds the configured budget."""


class TruncationError(PiqecError, RuntimeError):
    """A truncated-Fock computation failed its truncation health check."""


class ClosureError(PiqecError, RuntimeError):
    """A geometric-phase loop left the bosonic mode entangled with the spins."""


class PreconditionError(PiqecError, ValueError):
    """A documented precondition of an operation was violated."""
