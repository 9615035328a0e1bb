"""Exception hierarchy shared by all solver layers."""


class SingularSAEError(Exception):
    """Base class for every error raised by this package."""


class PoleError(SingularSAEError):
    """An argument landed on (or numerically too close to) a pole."""


class NonConvergence(SingularSAEError):
    """A series or iteration exhausted its term budget before converging."""


class NotUnitaryError(SingularSAEError):
    """A matrix supplied as a U(2) characteristic matrix is not unitary."""


class CouplingOutOfRange(SingularSAEError):
    """Inverse-square coupling outside the window that keeps the origin limit-circle."""


class WindowTooSmall(SingularSAEError):
    """Fewer bound-state roots were found than requested in the search window."""


class SeriesFailure(SingularSAEError):
    """Frobenius start-up failed (inconsistent indicial data or no convergence)."""


class StepFailure(SingularSAEError):
    """The ODE integrator failed to advance."""


class NoDecaySeparation(SingularSAEError):
    """Growing and decaying solutions could not be discriminated at the outer edge."""


class ExtrapolationFailure(SingularSAEError):
    """Wronskian limit extrapolation toward the singularity drifted instead of settling."""


class ConfigError(SingularSAEError):
    """Invalid run configuration (CLI exit code 2)."""
