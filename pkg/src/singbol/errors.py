"""Exception taxonomy shared by all modules.

Every numerical failure raised by this package derives from ``SingbolError``
so callers (in particular the CLI) can map them to a nonzero exit status.
"""


class SingbolError(Exception):
    """Base class for all package-level numerical errors."""


class NonConvergentError(SingbolError):
    """Adaptive quadrature exhausted its subdivision budget above tolerance."""


class NegativeDensityError(SingbolError):
    """A sampled density value was negative beyond round-off."""


class OutOfRangeError(SingbolError):
    """A query (mass, radius) lies outside the tabulated/defined range."""


class TargetExhaustedError(SingbolError):
    """Source mass exceeds the total mass of the target measure."""


class NotDecreasingError(SingbolError):
    """A profile required to be strictly decreasing is not."""


class NotAdmissibleError(SingbolError):
    """The differential-inequality certificate is violated."""


class MassTooLargeError(SingbolError):
    """Exterior mass meets or exceeds the 8*pi*(1-alpha) ceiling."""


class BoundaryMismatchError(SingbolError):
    """Profile boundary value does not match the reference bubble."""


class MassMismatchError(SingbolError):
    """Equal-mass precondition between two profiles fails."""


class GeneratorFailedError(SingbolError):
    """A generated test profile failed its recomputed certificate."""


class SubharmonicRegimeError(SingbolError):
    """gamma <= beta/8pi - 1: the weight is subharmonic everywhere."""


class AtPoleError(SingbolError):
    """Stereographic projection evaluated at the projection pole."""


class NoConvergenceError(SingbolError):
    """A shooting/root-finding iteration failed to converge."""


class RhoOutOfRangeError(SingbolError):
    """Requested total mass is outside the solvable range."""


class OrderOutOfRangeError(SingbolError):
    """A conical order is outside the range required by the threshold rule."""
