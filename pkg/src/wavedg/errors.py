"""Exception types for numerical failures."""


class NumericalFailure(RuntimeError):
    """A solver step could not be completed."""


class LocalSolveError(NumericalFailure):
    """Singular element-local system in the u_t solve."""

    def __init__(self, element: int, message: str = ""):
        self.element = element
        super().__init__(message or f"singular local system on element {element}")


class BlowUpError(NumericalFailure):
    """Solution magnitude exceeded the blow-up threshold (or went non-finite)."""

    def __init__(self, t: float, max_abs_u: float):
        self.t = t
        self.max_abs_u = max_abs_u
        super().__init__(f"blow-up detected at t={t}: max |u| coefficient {max_abs_u:.3e}")


class NonFiniteValueError(NumericalFailure):
    """A pointwise evaluation overflowed to a non-finite value."""
