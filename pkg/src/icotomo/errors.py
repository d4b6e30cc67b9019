"""Exception types shared across the package."""


class IcotomoError(Exception):
    """Base class for all package-specific errors."""


class ApproximateShift(IcotomoError):
    """A window shift is not exactly representable and an interval test
    could not separate a point from the boundary."""


class EmptyWindowInterior(IcotomoError):
    """A window with empty interior cannot define a model set."""


class NoInteriorPoint(IcotomoError):
    """No module point with star image inside the window interior was
    found within the configured search radius."""


class EmbeddingFailed(IcotomoError):
    """A finite set could not be carried into the target patch."""


class PreconditionViolated(IcotomoError):
    """An operation was called on inputs that violate its contract."""


class NotCoplanarDirections(IcotomoError):
    """Directions do not lie in the distinguished slicing plane."""


class NotInPlane(IcotomoError):
    """Point does not lie in the plane required by the isometry."""


class Infeasible(IcotomoError):
    """No point set matches the given line counts."""


class TooLarge(IcotomoError):
    """Instance exceeds the size bound of the exhaustive oracle."""


class HullTouchesPatchBoundary(IcotomoError):
    """Convexity is undecidable because the hull reaches the boundary of
    the enumerated region."""
