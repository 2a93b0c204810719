"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input or domain object violates its structural contract."""


class UnreachableFluxError(ValidationError):
    """The requested zero-coupling point cannot be reached with the given junction energy.

    ``required_energy_scale`` is the factor by which the Josephson energy
    would have to grow for the target inverse-inductance ratio to become
    reachable.
    """

    def __init__(self, message: str, required_energy_scale: float | None = None):
        super().__init__(message)
        self.required_energy_scale = required_energy_scale


class NumericError(RuntimeError):
    """A numeric routine failed to converge to its required tolerance."""
