"""Exception types shared across the package."""


class UsageError(ValueError):
    """Invalid arguments or unsupported parameter regime."""


class InfeasibleError(RuntimeError):
    """No solution exists for the requested decoding problem."""


class CapacityError(RuntimeError):
    """Problem size exceeds a hard enumeration bound."""


class ContractViolation(RuntimeError):
    """An internal consistency postcondition failed (indicates a bug)."""


class FitFailure(RuntimeError):
    """Threshold fit did not converge or no crossing is present."""
