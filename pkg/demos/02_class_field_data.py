"""Reduced forms, CM points, ray class degrees and class polynomials."""

import mpmath as mp

from rayclass import (
    PrecisionContext,
    check_hypothesis,
    hilbert_class_poly,
    ideal_factorization,
    make_field,
    ray_class_degree,
)

ctx = PrecisionContext(bits=300, eps="1e-40")

for d in (-7, -23, -39, -56):
    f = make_field(d)
    print(f"== d_K = {d}:  theta = {f.theta_str()},  h = {f.h} ==")
    for q in f.forms:
        print(f"   form {q.as_tuple()}  ->  CM point ({-q.b}+sqrt({d}))/{2*q.a}")

print("\n== ray class degrees [K_(N) : K] ==")
header = "      " + "".join(f"N={n:<6}" for n in (2, 3, 4, 5, 8, 9, 12))
print(header)
for d in (-7, -39, -40):
    f = make_field(d)
    row = "".join(f"{ray_class_degree(f, n):<8}" for n in (2, 3, 4, 5, 8, 9, 12))
    print(f"{d:>5} {row}")

print("\n== ideal factorization of N*O_K, d_K = -39, N = 12 ==")
for fac in ideal_factorization(-39, 12):
    print(f"   p = {fac.p}: {fac.splitting}, prime-ideal exponent {fac.e}, "
          f"norm {fac.norm}, phi = {fac.phi()}")

print("\n== conductor condition for the unit-ratio generators ==")
for d, n in ((-7, 3), (-7, 9), (-7, 15), (-39, 3)):
    rep = check_hypothesis(make_field(d), n)
    extra = f", reciprocal-phi sum {rep.alt_sum}" if rep.alt_sum is not None else ""
    print(f"   d={d:>4}, N={n:>2}: degree {rep.degree:>4}, "
          f"holds: {rep.ok}{extra}")

print("\n== Hilbert class polynomials ==")
for d in (-7, -23, -31):
    poly = hilbert_class_poly(make_field(d), ctx)
    coeffs = [r[0] for r in poly.recognized]
    terms = " + ".join(
        f"{c}*X^{k}" if k else str(c) for k, c in enumerate(coeffs))
    print(f"   d = {d}: {terms}")
    with ctx.work():
        print("        recognition residual:", mp.nstr(poly.residual, 4))
