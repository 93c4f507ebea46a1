"""Exception hierarchy shared across the library."""


class SolitonLabError(Exception):
    """Base class for all library-specific failures."""


class SpecInvalid(SolitonLabError, ValueError):
    """A solution recipe violates its own consistency requirements."""


class AlgebraMismatch(SolitonLabError, ValueError):
    """Binary operation on numbers from different Cayley algebras."""


class UnsupportedSymmetry(SolitonLabError, ValueError):
    """A PT conjugation was requested that the algebra does not carry."""


class DegenerateImaginary(SolitonLabError, ArithmeticError):
    """The imaginary magnitude of a split-signature number vanishes or turns negative."""


class LightCone(SolitonLabError, ArithmeticError):
    """Hyperbolic polar coordinates requested on or outside the time-like region."""


class NonPolynomialParameter(SolitonLabError, ValueError):
    """Seed exponent does not depend Laurent-polynomially on the spectral parameter."""


class SingularWronskian(SolitonLabError, ArithmeticError):
    """Wronskian magnitude fell below the singular guard."""


class InsufficientGrid(SolitonLabError, ValueError):
    """Finite-difference stencil does not fit inside the grid."""


class NonDecaying(SolitonLabError, ArithmeticError):
    """Integrand tail estimate exceeds the quadrature tolerance budget."""


class NoPeak(SolitonLabError, ArithmeticError):
    """No unmasked local maximum found on the requested side."""


class PeakTrackingFailed(SolitonLabError, ArithmeticError):
    """Constituent tracking for displacement measurement failed."""


class BranchDiscontinuity(SolitonLabError, ArithmeticError):
    """Phase unwrapping left a jump larger than the continuity bound."""


class ZeroFieldLine(SolitonLabError, ArithmeticError):
    """Charge recursion requested along a line where the field vanishes."""


class GridNotSymmetric(SolitonLabError, ValueError):
    """Nonlocal reduction check requires a grid symmetric about the origin."""


class DenominatorVanishes(SolitonLabError, ArithmeticError):
    """Gauge-map denominator vanishes on the whole requested region."""


class ZeroBlock(SolitonLabError, ArithmeticError):
    """A determinant block vanishes identically."""


class MassNonPositive(SolitonLabError, ArithmeticError):
    """Effective time-dependent mass is not positive on the working window."""


class DegenerateMap(SolitonLabError, ValueError):
    """Intertwining with equal quantum numbers gives the trivial zero state."""


class NoHermitianPartner(SolitonLabError, ArithmeticError):
    """The reality condition cannot be met; no Hermitian partner Hamiltonian exists."""


class ConstraintViolated(SolitonLabError, ArithmeticError):
    """A constraint ODE of a Dyson map is not satisfied."""
