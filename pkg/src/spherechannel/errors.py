"""Exception types shared across the package."""


class RadialDomainError(ValueError):
    """Radial function requested at an argument outside its domain (e.g. Hankel at z=0)."""


class RecurrenceOverflowError(ArithmeticError):
    """A recurrence intermediate left the representable range."""

    def __init__(self, order, argument, message=None):
        self.order = order
        self.argument = argument
        super().__init__(
            message or f"recurrence overflow at order n={order}, argument z={argument!r}"
        )


class InterfacePlacementError(ValueError):
    """A point sits on (or too close to) the sphere interface r = d."""


class CoincidentPointsError(ValueError):
    """Field point coincides with the source point."""


class SeriesConvergenceError(RuntimeError):
    """Mode series failed to meet the requested tolerance within the order cap."""

    def __init__(self, order_cap, achieved, requested):
        self.order_cap = order_cap
        self.achieved = achieved
        self.requested = requested
        super().__init__(
            f"series not converged at order cap Q={order_cap}: "
            f"achieved residual {achieved:.3e}, requested {requested:.3e}"
        )


class SingularInterfaceError(ArithmeticError):
    """Interface continuity system is singular (sphere resonance)."""

    def __init__(self, order, determinant_magnitude):
        self.order = order
        self.determinant_magnitude = determinant_magnitude
        super().__init__(
            f"singular interface system at order n={order}, "
            f"|det| = {determinant_magnitude:.3e}"
        )


class ScenarioValidationError(ValueError):
    """A scenario description (JSON or constructor input) failed validation."""
