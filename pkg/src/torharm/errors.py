"""Exception types shared across the package."""


class TorharmError(Exception):
    """Base class for all torharm errors."""


class FocalRingSingularity(TorharmError):
    """Point is (numerically) on the focal ring, where toroidal coordinates degenerate."""


class DegenerateLimit(TorharmError):
    """Toroidal point at the xi=0, eta=0 chart boundary (the point at infinity)."""


class AxisPointError(TorharmError):
    """Operation requires rho > 0 but the point lies on the z-axis."""


class TooCloseToSingularity(TorharmError):
    """Legendre-function series could not be converged, even with the extended-precision fallback."""


class QuadratureFailure(TorharmError):
    """Adaptive quadrature exceeded its refinement budget."""


class BranchBoundary(TorharmError):
    """Evaluation point sits in the dead zone around r = a where both series branches stall."""


class UnsupportedExpansion(TorharmError):
    """Requested expansion does not exist (axial toroidal harmonics have no spherical series)."""


class InsideConductor(TorharmError):
    """Field point lies strictly inside the conducting torus."""


class InvalidGeometry(TorharmError):
    """Torus radii violate 0 < r0 < R0."""


class CoincidentPoints(TorharmError):
    """The two points of a Green's-function pair coincide."""
