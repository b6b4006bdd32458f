"""Exception types shared across the package.

Numerical errors (NearZero, ImTooSmall, OnLattice, DegenerateIndex) signal
that an evaluation cannot proceed at the requested point/precision; input
errors signal invalid arithmetic data (bad discriminant, non-invertible
matrix, duplicate roots).  The CLI maps the two groups onto distinct exit
codes.
"""


class RayclassError(Exception):
    """Base class for all package-specific errors."""


class NumericalError(RayclassError):
    """An evaluation hit a singular/ill-conditioned configuration."""


class NearZero(NumericalError):
    """Division or root extraction on an operand with |z| below eps."""


class ImTooSmall(NumericalError):
    """Im(tau) below the supported floor; |q| too close to 1."""


class OnLattice(NumericalError):
    """Argument within tolerance of a lattice point (pole of wp)."""


class DegenerateIndex(NumericalError):
    """A function index (r1, r2) landed in Z^2 where it must not."""


class InputError(RayclassError):
    """Invalid arithmetic input (validation failure, not a numerical one)."""


class NotFundamental(InputError):
    """Discriminant is not a fundamental discriminant."""


class NotImaginary(InputError):
    """Discriminant is not negative."""


class UnsupportedDiscriminant(InputError):
    """Operation requires d_K <= -7 (unit group {+1, -1})."""


class NonInvertible(InputError):
    """A lifted matrix is not invertible modulo N."""


class DuplicateValues(InputError):
    """Polynomial construction received coincident roots."""
