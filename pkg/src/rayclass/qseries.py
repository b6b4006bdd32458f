"""q-expansion evaluators: eta, Eisenstein forms, Siegel functions, wp.

Conventions fixed across the package:

* ``eta`` carries the sqrt(2*pi)*zeta_8 prefactor, so that eta(tau)^24 equals
  the discriminant ``delta`` (computed from its own product) with no stray
  powers of 2*pi.  Every stored value follows this normalization; the curve
  coordinates u, v, x, y below are ratios in which it matters.
* Fractional powers of q are evaluated as exp of the matching multiple of
  2*pi*i*tau -- principal branch straight from tau, never as roots of q.
* Index bookkeeping is exact: Siegel indices are Fractions, Bernoulli values
  and fractional parts are computed in rational arithmetic, and reduction of
  an index into [0,1)^2 multiplies the value by the exact quasi-periodicity
  root of unity of the underlying Klein form.  Floating point enters only
  when a series is summed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import mpmath as mp

from .errors import DegenerateIndex, ImTooSmall, OnLattice
from .numerics import MIN_IM, GUARD_BITS, PrecisionContext, safe_div, truncation_terms


@dataclass(frozen=True)
class ModularPoint:
    """A point tau in the upper half-plane with q = exp(2*pi*i*tau) cached."""

    tau: mp.mpc
    q: mp.mpc
    ctx: PrecisionContext

    @classmethod
    def from_complex(cls, tau, ctx: PrecisionContext) -> "ModularPoint":
        with ctx.work():
            if isinstance(tau, (tuple, list)):
                tau = ctx.mpc(*tau)
            else:
                tau = mp.mpc(tau)
            if not mp.im(tau) >= MIN_IM:
                raise ImTooSmall(
                    f"Im(tau)={mp.nstr(mp.im(tau), 8)} below floor {MIN_IM}"
                )
            q = mp.exp(2j * mp.pi * tau)
        return cls(tau, q, ctx)

    @classmethod
    def from_quadratic(cls, a: int, b: int, d: int, ctx: PrecisionContext) -> "ModularPoint":
        """The root (-b + sqrt(d))/(2a) of a X^2 + b X + c, d = b^2 - 4ac < 0."""
        if d >= 0 or a <= 0:
            raise ValueError("expected a > 0 and negative discriminant")
        with ctx.work():
            tau = (mp.mpf(-b) + mp.sqrt(mp.mpf(-d)) * mp.mpc(0, 1)) / (2 * a)
        return cls.from_complex(tau, ctx)

    @property
    def im(self) -> mp.mpf:
        return mp.im(self.tau)

    def terms(self) -> int:
        """Truncation index for q-products/series at this point."""
        return truncation_terms(self.im, self.ctx.eps)


@dataclass(frozen=True)
class FractionPair:
    """An index (r1, r2) in Q^2 \\ Z^2 labelling Siegel/Fricke functions."""

    r1: Fraction
    r2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r1", Fraction(self.r1))
        object.__setattr__(self, "r2", Fraction(self.r2))
        if self.r1.denominator == 1 and self.r2.denominator == 1:
            raise DegenerateIndex(f"index ({self.r1}, {self.r2}) lies in Z^2")

    @classmethod
    def from_parts(cls, p1: int, p2: int, n: int) -> "FractionPair":
        if n < 2:
            raise ValueError("denominator must be >= 2")
        return cls(Fraction(p1, n), Fraction(p2, n))

    @property
    def level(self) -> int:
        """lcm of the two denominators."""
        return math.lcm(self.r1.denominator, self.r2.denominator)

    def doubled(self):
        """(2 r1, 2 r2), or None when it degenerates into Z^2."""
        a, b = 2 * self.r1, 2 * self.r2
        if a.denominator == 1 and b.denominator == 1:
            return None
        return FractionPair(a, b)

    def reduced(self) -> "FractionPair":
        """Fractional-part representative in [0,1)^2."""
        return FractionPair(self.r1 - math.floor(self.r1), self.r2 - math.floor(self.r2))

    def negated(self) -> "FractionPair":
        return FractionPair(-self.r1, -self.r2)


@dataclass(frozen=True)
class CuspData:
    """A cusp s = a/c (None for infinity), its width, and a transporter

    alpha = ((a, b), (c, d)) in SL2(Z) with alpha(infinity) = s.
    """

    cusp: Fraction | None
    width: int
    transporter: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        (a, b), (c, d) = self.transporter
        if a * d - b * c != 1:
            raise ValueError("transporter must have determinant 1")
        if self.width < 1:
            raise ValueError("width must be a positive integer")
        if c == 0:
            if self.cusp is not None:
                raise ValueError("c = 0 transports infinity to infinity")
        else:
            if self.cusp is None or Fraction(a, c) != Fraction(self.cusp):
                raise ValueError("transporter does not map infinity to the cusp")


def bernoulli2(x) -> Fraction:
    """Second Bernoulli polynomial X^2 - X + 1/6, exact."""
    x = Fraction(x)
    return x * x - x + Fraction(1, 6)


def _frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


def _qpow(pt: ModularPoint, e: Fraction) -> mp.mpc:
    """q^e as exp(2*pi*i*tau*e), principal branch from tau."""
    return mp.exp(2j * mp.pi * pt.tau * mp.mpf(e.numerator) / e.denominator)


def _unit_phase(e: Fraction) -> mp.mpc:
    """exp(pi*i*e) for an exact rational e."""
    return mp.exp(mp.mpc(0, mp.pi) * mp.mpf(e.numerator) / e.denominator)


def eta(pt: ModularPoint) -> mp.mpc:
    """Dedekind eta with the sqrt(2*pi)*zeta_8 prefactor; nonzero on H."""
    with pt.ctx.work():
        acc = mp.mpc(1)
        qn = mp.mpc(1)
        for _ in range(pt.terms()):
            qn *= pt.q
            acc *= 1 - qn
        pref = mp.sqrt(2 * mp.pi) * mp.exp(mp.mpc(0, mp.pi) / 4)
        return pref * mp.exp(mp.mpc(0, mp.pi) * pt.tau / 12) * acc


def _sigma35(n: int) -> tuple[int, int]:
    s3 = s5 = 0
    for d in range(1, int(math.isqrt(n)) + 1):
        if n % d == 0:
            e = n // d
            s3 += d**3
            s5 += d**5
            if e != d:
                s3 += e**3
                s5 += e**5
    return s3, s5


def eisenstein(pt: ModularPoint) -> tuple[mp.mpc, mp.mpc]:
    """(g2, g3) from the sigma_3 / sigma_5 Fourier series, with prefactors
    (2*pi)^4/12 and (2*pi)^6/216."""
    with pt.ctx.work():
        m = pt.terms()
        cut = pt.ctx.eps * mp.mpf(2) ** (-GUARD_BITS)
        qn = mp.mpc(1)
        s3 = mp.mpc(0)
        s5 = mp.mpc(0)
        n = 0
        while True:
            n += 1
            qn *= pt.q
            sig3, sig5 = _sigma35(n)
            t5 = sig5 * qn
            s3 += sig3 * qn
            s5 += t5
            # sigma_5(n) >= sigma_3(n), so t5 controls both tails
            if n >= m and abs(t5) < cut:
                break
            if n > 100 * m + 1000:  # pragma: no cover
                raise RuntimeError("eisenstein series failed to settle")
        twopi = 2 * mp.pi
        g2 = twopi**4 / 12 * (1 + 240 * s3)
        g3 = twopi**6 / 216 * (1 - 504 * s5)
        return g2, g3


def delta(pt: ModularPoint) -> mp.mpc:
    """Discriminant (2*pi*i)^12 * q * prod (1-q^n)^24; never zero on H."""
    with pt.ctx.work():
        acc = mp.mpc(1)
        qn = mp.mpc(1)
        for _ in range(pt.terms()):
            qn *= pt.q
            acc *= 1 - qn
        return (2j * mp.pi) ** 12 * pt.q * acc**24


def j_invariant(pt: ModularPoint) -> mp.mpc:
    """j = 2^6 3^3 g2^3 / delta."""
    with pt.ctx.work():
        g2, _ = eisenstein(pt)
        return safe_div(1728 * g2**3, delta(pt), pt.ctx)


def siegel(r: FractionPair, pt: ModularPoint) -> mp.mpc:
    """Siegel function g_{(r1,r2)}(tau) via its q-product; nonzero on H.

    The product is evaluated on the reduced index in [0,1)^2; for shifted
    indices the value is corrected by the exact quasi-periodicity root of
    unity (-1)^(s1*s2+s1+s2) * exp(-pi*i*(s1*a2 - s2*a1)) of the Klein form,
    where (a1, a2) is the reduced index and (s1, s2) the integer shift.
    """
    with pt.ctx.work():
        s1, s2 = math.floor(r.r1), math.floor(r.r2)
        a1, a2 = r.r1 - s1, r.r2 - s2
        w = mp.exp(2j * mp.pi * (pt.tau * mp.mpf(a1.numerator) / a1.denominator
                                 + mp.mpf(a2.numerator) / a2.denominator))
        winv = 1 / w
        core = 1 - w
        qn = mp.mpc(1)
        for _ in range(pt.terms()):
            qn *= pt.q
            core *= (1 - qn * w) * (1 - qn * winv)
        val = -_qpow(pt, bernoulli2(a1) / 2) * _unit_phase(a2 * (a1 - 1)) * core
        if (s1, s2) != (0, 0):
            sign = -1 if (s1 * s2 + s1 + s2) % 2 else 1
            val *= sign * _unit_phase(Fraction(-(s1 * a2 - s2 * a1)))
        return val


def siegel_order(r: FractionPair) -> Fraction:
    """q-order of g_r: (1/2) B2(<r1>), exact."""
    return bernoulli2(_frac(r.r1)) / 2


def y_cusp_order(r: FractionPair, cusp: CuspData) -> Fraction:
    """Order of y_{(0,1/N)} at a cusp of width w with transporter alpha.

    Equals w*(<c/N> - 1/4) when <c/N> < 1/2 and w*(-<c/N> + 3/4) otherwise,
    c the lower-left transporter entry.  Requires r = (0, 1/N) with N > 2.
    """
    n = r.r2.denominator
    if r.r1 != 0 or r.r2 != Fraction(1, n) or n <= 2:
        raise ValueError("cusp-order formula applies to r = (0, 1/N) with N > 2")
    c = cusp.transporter[1][0]
    x = _frac(Fraction(c, n))
    if x < Fraction(1, 2):
        return cusp.width * (x - Fraction(1, 4))
    return cusp.width * (-x + Fraction(3, 4))


def _reduce_mod_lattice(z: mp.mpc, pt: ModularPoint) -> tuple[mp.mpf, mp.mpf]:
    """Real coordinates (y, x) with z = y*tau + x reduced into [0,1)^2."""
    y = mp.im(z) / pt.im
    x = mp.re(z) - y * mp.re(pt.tau)
    return y - mp.floor(y), x - mp.floor(x)


def wp(z, pt: ModularPoint) -> mp.mpc:
    """Weierstrass wp(z; [tau, 1]) via the exponential-coordinate series.

    z may be any complex number at distance >= sqrt(eps) from the lattice.
    The direct lattice sum survives in the test oracles only; this series is
    the production path.
    """
    ctx = pt.ctx
    with ctx.work():
        z = mp.mpc(z)
        y, x = _reduce_mod_lattice(z, pt)
        dist = min(
            abs((y - dy) * pt.tau + (x - dx)) for dy in (0, 1) for dx in (0, 1)
        )
        if dist < mp.sqrt(ctx.eps):
            raise OnLattice(f"z within {mp.nstr(dist, 5)} of the lattice")
        u = mp.exp(2j * mp.pi * (y * pt.tau + x))
        cut = ctx.eps * mp.mpf(2) ** (-GUARD_BITS)
        total = mp.mpf(1) / 12 + u / (1 - u) ** 2
        m = pt.terms()
        qn = mp.mpc(1)
        n = 0
        while True:
            n += 1
            qn *= pt.q
            a = qn * u
            b = qn / u
            term = a / (1 - a) ** 2 + b / (1 - b) ** 2 - 2 * qn / (1 - qn) ** 2
            total += term
            if n >= m and abs(term) < cut:
                break
            if n > 100 * m + 1000:  # pragma: no cover
                raise RuntimeError("wp series failed to settle")
        return (2j * mp.pi) ** 2 * total


def wp_prime(r: FractionPair, pt: ModularPoint) -> mp.mpc:
    """wp'(r1*tau + r2) as the Siegel quotient -g_{2r} * eta^6 / g_r^4.

    The quasi-period exponentials of the Klein forms cancel exactly in
    sigma(2z)/sigma(z)^4, leaving this ratio.  At 2-torsion (2r in Z^2) the
    derivative vanishes identically and exact 0 is returned.
    """
    ctx = pt.ctx
    d = r.doubled()
    if d is None:
        return ctx.mpc(0)
    with ctx.work():
        num = siegel(d, pt) * eta(pt) ** 6
        return -safe_div(num, siegel(r, pt) ** 4, ctx)


class CurveCoords(NamedTuple):
    u: mp.mpc
    v: mp.mpc
    x: mp.mpc
    y: mp.mpc


def u_value(pt: ModularPoint) -> mp.mpc:
    """u = g2^3 / eta^24."""
    with pt.ctx.work():
        g2, _ = eisenstein(pt)
        return safe_div(g2**3, eta(pt) ** 24, pt.ctx)


def v_value(pt: ModularPoint) -> mp.mpc:
    """v = g3 / eta^12."""
    with pt.ctx.work():
        _, g3 = eisenstein(pt)
        return safe_div(g3, eta(pt) ** 12, pt.ctx)


def x_value(pt: ModularPoint, r: FractionPair) -> mp.mpc:
    """x = g2 * g3 * wp(r1*tau + r2) / delta (Fricke function over -2^7 3^5)."""
    with pt.ctx.work():
        g2, g3 = eisenstein(pt)
        z = pt.tau * mp.mpf(r.r1.numerator) / r.r1.denominator \
            + mp.mpf(r.r2.numerator) / r.r2.denominator
        return safe_div(g2 * g3 * wp(z, pt), delta(pt), pt.ctx)


def y_value(pt: ModularPoint, r: FractionPair) -> mp.mpc:
    """y = -g_{2r} / g_r^4; requires 2r outside Z^2."""
    d = r.doubled()
    if d is None:
        raise DegenerateIndex("y undefined at 2-torsion index (2r in Z^2)")
    with pt.ctx.work():
        return -safe_div(siegel(d, pt), siegel(r, pt) ** 4, pt.ctx)


def normalized(pt: ModularPoint, r: FractionPair) -> CurveCoords:
    """Normalized curve data (u, v, x, y) at tau for index r.

    Shares eta/Eisenstein/delta evaluations; satisfies u - 27 v^2 = 1 and
    u v^3 y^2 = 4 x^3 - u v^2 x - u v^4 identically in tau.
    """
    d = r.doubled()
    if d is None:
        raise DegenerateIndex("normalized coordinates need 2r outside Z^2")
    ctx = pt.ctx
    with ctx.work():
        g2, g3 = eisenstein(pt)
        et = eta(pt)
        e12 = et**12
        dl = delta(pt)
        u = safe_div(g2**3, e12 * e12, ctx)
        v = safe_div(g3, e12, ctx)
        z = pt.tau * mp.mpf(r.r1.numerator) / r.r1.denominator \
            + mp.mpf(r.r2.numerator) / r.r2.denominator
        x = safe_div(g2 * g3 * wp(z, pt), dl, ctx)
        y = -safe_div(siegel(d, pt), siegel(r, pt) ** 4, ctx)
        return CurveCoords(u, v, x, y)
