"""Precision bookkeeping and the arbitrary-precision arithmetic contract.

All evaluators in this package compute with mpmath numbers inside a
:class:`PrecisionContext`: ``bits`` is the working mantissa precision and
``eps`` the absolute error the *final* results are aimed at.  The gap between
``2^-bits`` and ``eps`` (at least 16 bits, enforced) absorbs rounding and
truncation noise, which is validated by precision-doubling tests rather than
by interval arithmetic.

Truncation of every q-series/product is governed by :func:`truncation_terms`:
the smallest M with |q|^M < eps * 2^-16, where |q| = exp(-2*pi*Im(tau)).  All
series used downstream converge at least geometrically in |q| once polynomial
coefficient growth is absorbed (the evaluators extend adaptively past M when
needed, keeping determinism).

Values are plain ``mpmath.mpc``/``mpmath.mpf`` objects; arithmetic on them is
deterministic given (bits, operands).  Helpers :func:`safe_div` and
:func:`principal_root` implement the near-zero guard of the contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import ImTooSmall, NearZero

# Floor for Im(tau).  Low enough to cover every point the verification layer
# evaluates (the level-4 elliptic-point sweep reaches Im = 1/13).
MIN_IM = 0.05

# Tail guard: series tails are pushed below eps * 2^-GUARD_BITS.
GUARD_BITS = 16


def _to_mpf(x) -> mp.mpf:
    """Convert ints, floats, decimal strings, Fractions at current precision."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return mp.mpf(x)
    return mp.mpf(x)


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (bits) plus target absolute error (eps).

    Invariants: bits >= 64 and eps >= 2^(-bits+16), so at least 16 guard bits
    separate the target accuracy from the raw arithmetic accuracy.
    """

    bits: int = 256
    eps: object = "1e-40"

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < 64:
            raise ValueError(f"bits must be an integer >= 64, got {self.bits!r}")
        with mp.workprec(self.bits):
            eps = _to_mpf(self.eps)
            if not eps > 0:
                raise ValueError("eps must be positive")
            if eps < mp.mpf(2) ** (-self.bits + GUARD_BITS):
                raise ValueError(
                    f"eps={mp.nstr(eps, 8)} leaves no guard bits at {self.bits} bits"
                )
        object.__setattr__(self, "eps", eps)

    def work(self):
        """Context manager switching mpmath to this precision."""
        return mp.workprec(self.bits)

    @property
    def dps(self) -> int:
        """Decimal digits carried at this precision."""
        return int(self.bits / 3.3219280948873626) + 2

    def mpf(self, x) -> mp.mpf:
        with self.work():
            return _to_mpf(x)

    def mpc(self, re, im=0) -> mp.mpc:
        with self.work():
            return mp.mpc(_to_mpf(re), _to_mpf(im))


def truncation_terms(im_tau, eps) -> int:
    """Smallest M with |q|^M < eps * 2^-16 for |q| = exp(-2*pi*im_tau).

    Downstream products/sums truncate at index M.  Raises ImTooSmall below
    the Im(tau) floor, where the geometric tail heuristic degrades.
    """
    with mp.workprec(80):
        im = _to_mpf(im_tau)
        if not im >= MIN_IM:
            raise ImTooSmall(f"Im(tau)={mp.nstr(im, 8)} below floor {MIN_IM}")
        e = _to_mpf(eps)
        if not e > 0:
            raise ValueError("eps must be positive")
        x = (-mp.log(e) + GUARD_BITS * mp.log(2)) / (2 * mp.pi * im)
        return max(1, int(mp.floor(x)) + 1)


def safe_div(num, den, ctx: PrecisionContext):
    """num / den, rejecting denominators with |den| < ctx.eps."""
    with ctx.work():
        den = mp.mpc(den)
        if abs(den) < ctx.eps:
            raise NearZero(f"division by |z|={mp.nstr(abs(den), 8)} < eps")
        return num / den


def principal_root(z, n: int, ctx: PrecisionContext):
    """Principal n-th root exp(log(z)/n); rejects |z| < ctx.eps."""
    if n < 1:
        raise ValueError("root order must be a positive integer")
    with ctx.work():
        z = mp.mpc(z)
        if abs(z) < ctx.eps:
            raise NearZero(f"root of |z|={mp.nstr(abs(z), 8)} < eps")
        return mp.exp(mp.log(z) / n)
