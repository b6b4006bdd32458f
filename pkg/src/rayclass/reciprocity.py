"""Explicit reciprocity machinery: the matrix group W_{N,theta}, its action
on Siegel indices, and enumeration of full Galois orbits of singular values.

A Galois element of the ray class field of level N is labelled by a pair
(alpha, Q): alpha in W_{N,theta}/{+-1} and Q a reduced form.  The label acts
on a singular value by transforming the function index with the matrix
alpha * beta_Q mod N and evaluating at the CM point of Q.  All index and
matrix arithmetic is exact; floating point enters only in the final Siegel /
Fricke evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .classfield import (
    Field,
    Mat,
    ReducedForm,
    beta_lift,
    cm_point,
    mat_det,
    mat_mul,
    ray_class_degree,
)
from .errors import DegenerateIndex, UnsupportedDiscriminant
from .numerics import PrecisionContext, safe_div
from .qseries import (
    FractionPair,
    ModularPoint,
    delta,
    eisenstein,
    siegel,
    wp,
)

DESCRIPTORS = ("y12N", "y4", "x", "pair")


@dataclass(frozen=True)
class WElement:
    """Element of W_{N,theta} mod {+-1}: residues (t, s) and the matrix
    ((t - B*s, -C*s), (s, t)) mod N, stored at the canonical representative
    (lexicographically smaller of (t, s) and (-t, -s))."""

    t: int
    s: int
    n: int
    matrix: Mat

    @classmethod
    def make(cls, t: int, s: int, n: int, b: int, c: int) -> "WElement":
        t, s = t % n, s % n
        if ((-t) % n, (-s) % n) < (t, s):
            t, s = (-t) % n, (-s) % n
        m = (((t - b * s) % n, (-c * s) % n), (s, t))
        return cls(t, s, n, m)

    @property
    def det(self) -> int:
        return mat_det(self.matrix) % self.n

    @property
    def is_identity(self) -> bool:
        return (self.t, self.s) == (1, 0)


def w_group(field: Field, n: int) -> list[WElement]:
    """All invertible (t, s) pairs mod N, one representative per {+-1} pair,
    sorted by (t, s).  Size: ray_class_degree(field, n) / h for N >= 3."""
    if field.d > -7:
        raise UnsupportedDiscriminant("W group kernel statement needs d_K <= -7")
    if n < 2:
        raise ValueError("level must be >= 2")
    b, c = field.b_theta, field.c_theta
    seen = {}
    for t in range(n):
        for s in range(n):
            det = (t * t - b * s * t + c * s * s) % n
            if math.gcd(det, n) != 1:
                continue
            el = WElement.make(t, s, n, b, c)
            seen[(el.t, el.s)] = el
    return [seen[k] for k in sorted(seen)]


def act_index(r: FractionPair, m: Mat) -> FractionPair:
    """Row-vector action (r1, r2) * m, reduced to fractional parts, exact."""
    r1 = r.r1 * m[0][0] + r.r2 * m[1][0]
    r2 = r.r1 * m[0][1] + r.r2 * m[1][1]
    return FractionPair(r1 - math.floor(r1), r2 - math.floor(r2))


@dataclass(frozen=True)
class GaloisLabel:
    """One Galois conjugation label: (alpha, Q) with the lifted beta cached."""

    alpha: WElement
    form: ReducedForm
    beta: Mat

    def composite(self, n: int) -> Mat:
        return mat_mul(self.alpha.matrix, self.beta, n)


def labels(field: Field, n: int) -> list[GaloisLabel]:
    """The full label grid, ordered by (form position, canonical (t, s))."""
    group = w_group(field, n)
    out = []
    for q in field.forms:
        beta = beta_lift(q, field.d, n)
        for alpha in group:
            out.append(GaloisLabel(alpha, q, beta))
    return out


def _y_power_exponent(n: int) -> int:
    return 4 // math.gcd(4, n)


def _transformed_indices(label: GaloisLabel, n: int) -> tuple[FractionPair, FractionPair]:
    m = label.composite(n)
    base1 = FractionPair.from_parts(0, 1, n)
    base2 = FractionPair(Fraction(0), Fraction(2, n)) if n != 2 else None
    if base2 is None:
        raise DegenerateIndex("doubled index degenerates at N = 2")
    r1 = act_index(base1, m)
    r2 = act_index(base2, m)
    return r1, r2


def conjugate_values(field: Field, n: int, descriptor: str, ctx: PrecisionContext):
    """Evaluate the full Galois orbit of a singular-value descriptor.

    descriptor:
      * 'y12N': g_{(0,2/N)m}(theta_Q)^{12N} / g_{(0,1/N)m}(theta_Q)^{48N},
        computed as (g_{r2}/g_{r1}^4)^{12N} (identical value, stable scaling);
      * 'y4'  : (-g_{r2}/g_{r1}^4)^(4/gcd(4,N));
      * 'x'   : Fricke-normalized x with index (0,1/N)m at theta_Q;
      * 'pair': (x, y^(4/gcd(4,N))).

    The Galois action is realized as index transformation throughout.  This
    is exact for 'x' and 'y12N'.  For the fractional powers in 'y4'/'pair'
    the returned values are the canonical index-transformed representatives:
    each one agrees with the Galois conjugate up to a root of unity (their
    12N/epow-th powers reproduce the exact y12N orbit, and their moduli are
    exact), which is what the distinctness witnesses consume.

    Returns [(GaloisLabel, value-or-pair)] in deterministic label order, of
    length ray_class_degree(field, n).
    """
    if descriptor not in DESCRIPTORS:
        raise ValueError(f"unknown descriptor {descriptor!r}; pick from {DESCRIPTORS}")
    if field.d > -7:
        raise UnsupportedDiscriminant("conjugation labels need d_K <= -7")
    if n < 3:
        raise ValueError("descriptor evaluation needs N >= 3")
    epow = _y_power_exponent(n)
    group = w_group(field, n)
    out = []
    for q in field.forms:
        beta = beta_lift(q, field.d, n)
        theta_q = cm_point(q, field.d)
        pt = ModularPoint.from_quadratic(theta_q.a, theta_q.b, theta_q.d, ctx)
        with ctx.work():
            if descriptor in ("x", "pair"):
                g2, g3 = eisenstein(pt)
                dl = delta(pt)
        for alpha in group:
            label = GaloisLabel(alpha, q, beta)
            r1, r2 = _transformed_indices(label, n)
            with ctx.work():
                ratio = safe_div(siegel(r2, pt), siegel(r1, pt) ** 4, ctx)
                if descriptor == "y12N":
                    val = ratio ** (12 * n)
                elif descriptor == "y4":
                    val = (-ratio) ** epow
                else:
                    z = pt.tau * mp.mpf(r1.r1.numerator) / r1.r1.denominator \
                        + mp.mpf(r1.r2.numerator) / r1.r2.denominator
                    xval = safe_div(g2 * g3 * wp(z, pt), dl, ctx)
                    if descriptor == "x":
                        val = xval
                    else:
                        val = (xval, (-ratio) ** epow)
            out.append((label, val))
    expected = ray_class_degree(field, n)
    assert len(out) == expected, f"orbit size {len(out)} != degree {expected}"
    return out


def siegel_ramachandra_unit(field: Field, n: int, ctx: PrecisionContext) -> mp.mpc:
    """Unit-class invariant g_{(0,1/N)}(theta)^{12N} for f = N*O_K.

    Other classes follow from conjugate_values; the invariant transforms by
    the Artin map under label composition.
    """
    if n < 2:
        raise ValueError("level must be >= 2")
    theta = field.theta
    pt = ModularPoint.from_quadratic(theta.a, theta.b, theta.d, ctx)
    with ctx.work():
        return siegel(FractionPair.from_parts(0, 1, n), pt) ** (12 * n)
