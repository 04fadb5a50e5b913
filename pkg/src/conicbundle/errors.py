"""Exception types shared across the library."""


class ConicBundleError(Exception):
    """Base class for every error raised by this library."""


class ParseError(ConicBundleError):
    """Malformed or non-canonical textual input."""


class SchemaError(ConicBundleError):
    """A JSON payload violates the expected schema."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class InvalidTriple(ConicBundleError):
    """A point triple meant to pin down a Moebius map has a repeat."""


class InfiniteStabilizer(ConicBundleError):
    """Fewer than three points: the stabilizer is not finite."""


class InvalidModel(ConicBundleError):
    """Constructor input violates a model invariant."""


class MoveInfinityFirst(ConicBundleError):
    """The configuration touches infinity; conjugate it away first."""


class NotOnSurface(ConicBundleError):
    """The point does not satisfy the surface equation."""


class NotProportional(ConicBundleError):
    """The polynomial is not a positive rational multiple of the model's."""


class IrrationalScale(ConicBundleError):
    """The scaling factor is not a rational square; the map is symbolic only."""


class EmptyOrSingularFiber(ConicBundleError):
    """The fiber over this parameter has no real circle to rotate."""


class NotOnFiber(ConicBundleError):
    """The (y, z) pair does not lie on the fiber circle."""


class ChartPole(ConicBundleError):
    """The rotation sits at the excluded point of the rational chart."""


class DuplicateNode(ConicBundleError):
    """Two interpolation constraints share the same abscissa."""


class FiberMismatch(ConicBundleError):
    """A transport pair does not share its fiber coordinate."""


class PinCollision(ConicBundleError):
    """A pinned fiber collides with a transported fiber."""


class SingularFiberTarget(ConicBundleError):
    """Transport requested on a fiber where the circle degenerates."""


class TooManyIntervals(ConicBundleError):
    """The biconic construction supports at most three intervals."""


class IrrationalBoundary(ConicBundleError):
    """A form has real but irrational roots; the image is not representable."""


class ImageIsWholeLine(ConicBundleError):
    """Every parameter carries real points; not an interval configuration."""


class WitnessSearchFailed(ConicBundleError):
    """Bounded rational point search exhausted its budget."""

    def __init__(self, budget: int):
        super().__init__(f"no witness found within search budget {budget}")
        self.budget = budget


class NotAFiberClass(ConicBundleError):
    """The lattice vector is not a conic fiber class."""


class BasisMismatch(ConicBundleError):
    """Lattice vectors live in different bases."""


class Unsupported(ConicBundleError):
    """The request falls outside the supported parameter range."""


class OutsideRegion(ConicBundleError):
    """A path endpoint lies outside the rectangle union."""


class OnForbiddenLine(ConicBundleError):
    """A path endpoint sits on a forbidden coordinate line."""
