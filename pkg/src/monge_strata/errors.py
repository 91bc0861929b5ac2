"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MongeStrataError(Exception):
    """Base class for all library errors."""


# --- jet algebra ---

class NonvanishingConstantTerm(MongeStrataError):
    """Substituted series has a constant term; jet composition is undefined."""


class DegenerateImplicit(MongeStrataError):
    """The z-coefficient of the implicit equation vanishes at the origin."""


class OrderTooLow(MongeStrataError):
    """The stored truncation order is too small for the requested operation."""


# --- projective action ---

class InvalidTransform(MongeStrataError):
    """Transform parameters violate c != 0 or u1*v2 - u2*v1 != 0."""


class InternalError(MongeStrataError):
    """A bounded internal iteration failed to converge; indicates a bug."""


# --- projection ---

class ViewpointOnSurface(MongeStrataError):
    """The viewpoint coincides with the base point of the germ."""


class ChartDegenerate(MongeStrataError):
    """No affine chart of the target plane keeps the germ finite."""


class CorankTwo(MongeStrataError):
    """The plane germ has zero linear part; outside the recognized table."""


class NotParabolic(MongeStrataError):
    """Operation requires a prenormalized parabolic jet (2-jet y^2)."""


class NoSpecialViewpoint(MongeStrataError):
    """Both locating coefficients vanish; the special viewpoint is undefined."""


class NotApplicable(MongeStrataError):
    """The operation has no meaning for this point class."""


# --- classifier ---

class InsufficientOrder(MongeStrataError):
    """Classification needs a higher jet order than the one stored.

    The ``needed`` attribute names the order that would decide the class.
    """

    def __init__(self, needed: int, message: str = ""):
        self.needed = needed
        super().__init__(message or f"jet order too low; need order >= {needed}")


class IrrationalNormalization(MongeStrataError):
    """A reduction stage needs a real root not available in the coefficient field.

    Carries ``defining``, the coefficients (constant first) of the univariate
    polynomial whose real root would complete the stage.
    """

    def __init__(self, defining, message: str = ""):
        self.defining = list(defining)
        super().__init__(message or f"stage needs a real root of {self.defining}")


class NotClassified(MongeStrataError):
    """reduce_to_normal_form called on a jet classify() could not place."""


class ModuliMismatch(MongeStrataError):
    """Supplied moduli do not match the arity of the requested template."""


class ForbiddenModuli(MongeStrataError):
    """Moduli violate the template's open condition; use the deeper class."""


# --- BDE ---

class NotHyperbolic(MongeStrataError):
    """Operation requires a hyperbolic jet prenormalized to 2-jet xy."""


class ImplicitSolveFailed(MongeStrataError):
    """The direction-field equation has no series solution."""


class IdenticallyZero(MongeStrataError):
    """The discriminant truncates to zero at the stored order."""


# --- CLI ---

class ParseError(MongeStrataError):
    """Malformed surface input file."""


class InvariantViolation(MongeStrataError):
    """Input violates a Monge-jet invariant (names the offending key)."""
