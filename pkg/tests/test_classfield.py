import math
from fractions import Fraction as F

import pytest

from rayclass import (
    NotFundamental,
    NotImaginary,
    ReducedForm,
    UnsupportedDiscriminant,
    beta_lift,
    beta_matrices,
    check_hypothesis,
    cm_point,
    ideal_factorization,
    is_fundamental,
    make_field,
    ray_class_degree,
    reduced_forms,
    splitting,
)
from rayclass.classfield import mat_det


def fundamental_discs(lo, hi):
    return [d for d in range(lo, hi + 1) if is_fundamental(d)]


def brute_force_forms(d):
    """Independent triple loop over the reduction inequalities."""
    out = set()
    bound = int(math.isqrt(-d)) + 2
    for a in range(1, bound):
        for c in range(a, (-d // (4 * a)) + a + 2):
            for b in range(-a, a + 1):
                if b * b - 4 * a * c != d:
                    continue
                if not (-a < b <= a < c or 0 <= b <= a == c):
                    continue
                if math.gcd(math.gcd(a, abs(b)), c) != 1:
                    continue
                out.add((a, b, c))
    return out


# ------------------------------------------------------------------ field ---

def test_make_field_examples():
    f7 = make_field(-7)
    assert (f7.b_theta, f7.c_theta, f7.h) == (1, 2, 1)
    assert f7.theta_str() == "(-1+sqrt(-7))/2"
    f8 = make_field(-8)
    assert (f8.b_theta, f8.c_theta) == (0, 2)
    assert make_field(-39).h == 4
    # minimal polynomial check: theta^2 + B theta + C = 0 via the form
    for d in (-7, -8, -39, -40):
        f = make_field(d)
        assert f.b_theta**2 - 4 * f.c_theta == d


def test_make_field_rejects_bad_discs():
    with pytest.raises(NotImaginary):
        make_field(5)
    for d in (-12, -27, -63, -100, -9, -5):
        with pytest.raises(NotFundamental):
            make_field(d)


# ------------------------------------------------------------------ forms ---

def test_reduced_forms_frozen_examples():
    assert [q.as_tuple() for q in reduced_forms(-7)] == [(1, 1, 2)]
    assert [q.as_tuple() for q in reduced_forms(-4)] == [(1, 0, 1)]
    assert [q.as_tuple() for q in reduced_forms(-39)] == [
        (1, 1, 10), (2, -1, 5), (2, 1, 5), (3, 3, 4)]
    assert [q.as_tuple() for q in reduced_forms(-56)] == [
        (1, 0, 14), (2, 0, 7), (3, -2, 5), (3, 2, 5)]


def test_reduced_forms_against_brute_force():
    for d in fundamental_discs(-200, -3):
        got = {q.as_tuple() for q in reduced_forms(d)}
        assert got == brute_force_forms(d), f"mismatch at {d}"


def test_reduced_forms_invariants():
    for d in fundamental_discs(-120, -3):
        forms = reduced_forms(d)
        # deterministic order: a ascending, then b ascending
        keys = [(q.a, q.b) for q in forms]
        assert keys == sorted(keys)
        for q in forms:
            assert q.disc == d
            assert -q.a < q.b <= q.a < q.c or 0 <= q.b <= q.a == q.c
            assert math.gcd(math.gcd(q.a, abs(q.b)), q.c) == 1
            assert 1 <= q.a <= math.isqrt(-d // 3)


def test_known_class_numbers():
    known = {-3: 1, -4: 1, -7: 1, -8: 1, -11: 1, -15: 2, -19: 1, -20: 2,
             -23: 3, -24: 2, -31: 3, -35: 2, -39: 4, -40: 2, -43: 1,
             -52: 2, -56: 4, -67: 1, -84: 4, -163: 1}
    for d, h in known.items():
        assert len(reduced_forms(d)) == h, d


# --------------------------------------------------------------- cm point ---

def test_cm_point_examples(ctx256):
    import mpmath as mp

    f39 = make_field(-39)
    q = ReducedForm(2, 1, 5)
    cm = cm_point(q, -39)
    assert str(cm) == "(-1+sqrt(-39))/4"
    with ctx256.work():
        z = cm.to_mpc(ctx256)
        assert abs(mp.re(z) + F(1, 4)) < ctx256.eps
        assert abs(mp.im(z) - mp.sqrt(mp.mpf(39)) / 4) < ctx256.eps
    # principal form of 1 mod 4 field: theta itself
    assert cm_point(f39.principal, -39) == f39.theta
    # Im(theta_Q) >= sqrt(3)/2 for every reduced form
    for d in (-39, -84, -163):
        for q in reduced_forms(d):
            assert (-d) >= 3 * q.a * q.a  # Im = sqrt(-d)/(2a) >= sqrt(3)/2


# ---------------------------------------------------------- beta matrices ---

def test_beta_matrices_cases():
    # p not dividing a: ((a, (b-1)/2), (0, 1)) for odd discriminants
    m = beta_matrices(ReducedForm(1, 1, 10), -39, [3])[3]
    assert m == ((1, 0), (0, 1))
    # p | a, p not | c
    m = beta_matrices(ReducedForm(2, 1, 5), -39, [2])[2]
    assert m == ((-1, -5), (1, 0))
    # even discriminant, p | a and p | c
    m = beta_matrices(ReducedForm(2, 0, 7), -56, [7])[7]
    assert m == ((2, 0), (0, 1))
    m2 = beta_matrices(ReducedForm(2, 0, 7), -56, [2])[2]
    assert m2 == ((0, -7), (1, 0))
    # third case needs p | a and p | c: (3, 0, c) with 3 | c, d = -4*3*c
    # d = -84: forms include (3, 0, 7); p = 3 divides a but not c -> case 2;
    # use (2, 2, 3) of d = -20 with p = 2: 2 | a, 2 | c? c = 3 odd -> case 2.
    # construct case 3 via (2, 0, 4): not primitive; use d=-4, Q=(1,0,1), p=2:
    # p | a fails (a=1). Take d=-24, Q=(2,0,3), p=2: c odd. Case 3 arises for
    # p dividing gcd(a, c), e.g. d=-36 is not fundamental; use the raw rule:
    m3 = beta_matrices(ReducedForm(2, 0, 2), -16, [2])[2]
    assert m3 == ((-2, -2), (1, -1))


def test_beta_lift_examples():
    assert beta_lift(ReducedForm(2, 1, 5), -39, 8) == ((7, 3), (1, 0))
    f7 = make_field(-7)
    assert beta_lift(f7.principal, -7, 12) == ((1, 0), (0, 1))
    # composite level: residues agree with the per-prime matrices
    q = ReducedForm(2, 1, 5)
    lift = beta_lift(q, -39, 12)
    per = beta_matrices(q, -39, [2, 3])
    for i in range(2):
        for jj in range(2):
            assert lift[i][jj] % 4 == per[2][i][jj] % 4
            assert lift[i][jj] % 3 == per[3][i][jj] % 3
    assert math.gcd(mat_det(lift), 12) == 1


def test_beta_lift_nontrivial_case3():
    # (3, 3, 4) of d = -39 with p = 3: 3 | a, 3 not | 4 -> case 2
    lift = beta_lift(ReducedForm(3, 3, 4), -39, 3)
    assert lift == (((-2) % 3, (-4) % 3), (1, 0))


# -------------------------------------------------------------- splitting ---

def test_splitting_examples():
    assert splitting(3, -7) == "inert"
    assert splitting(3, -39) == "ramified"
    assert splitting(2, -7) == "split"
    assert splitting(2, -40) == "ramified"
    assert splitting(5, -39) == "split"  # -39 = 1 mod 5, and 1 is a QR
    assert splitting(11, -7) == "split"  # -7 is a QR mod 11 (2^2=4, 4-11=-7)


def test_ideal_factorization_shapes():
    fac = ideal_factorization(-7, 12)
    # 2 splits, 3 inert: two factors over 2, one over 3
    assert [(f.p, f.splitting, f.e, f.norm) for f in fac] == [
        (2, "split", 2, 2), (2, "split", 2, 2), (3, "inert", 1, 9)]
    fac = ideal_factorization(-39, 3)
    assert [(f.p, f.splitting, f.e, f.norm) for f in fac] == [(3, "ramified", 2, 3)]


# ----------------------------------------------------------------- degree ---

def test_ray_class_degree_examples():
    assert ray_class_degree(make_field(-7), 3) == 4
    assert ray_class_degree(make_field(-39), 3) == 12
    assert ray_class_degree(make_field(-7), 1) == 1
    assert ray_class_degree(make_field(-39), 1) == 4
    assert ray_class_degree(make_field(-39), 8) == 32
    assert ray_class_degree(make_field(-40), 12) == 64
    assert ray_class_degree(make_field(-7), 9) == 36


def test_ray_class_degree_inert_ramified_closed_forms():
    """For N = p^n with odd p inert/ramified: h(p^2-1)p^(2n-2)/2 resp.
    h(p-1)p^(2n-1)/2."""
    for d in (-7, -39, -40):
        f = make_field(d)
        for p in (3, 5, 7):
            s = splitting(p, d)
            for n in (1, 2):
                if s == "inert":
                    expect = f.h * (p * p - 1) * p ** (2 * n - 2) // 2
                elif s == "ramified":
                    expect = f.h * (p - 1) * p ** (2 * n - 1) // 2
                else:
                    continue
                assert ray_class_degree(f, p**n) == expect, (d, p, n)


def test_degree_n2_unit_class():
    # w(2 O_K) = 2: -1 = 1 mod 2 O_K, so N = 2 keeps the factor 2
    f7 = make_field(-7)
    # 2 splits in Q(sqrt(-7)); phi(2 O_K) = 1, degree = 1 * 1 * 2 / 2 = 1
    assert ray_class_degree(f7, 2) == 1
    f8 = make_field(-8)  # 2 ramified: phi(p^2) = 2, degree = 1*2*2/2 = 2
    assert ray_class_degree(f8, 2) == 2


def test_degree_rejects_small_disc():
    with pytest.raises(UnsupportedDiscriminant):
        ray_class_degree(make_field(-4), 5)


# ------------------------------------------------------------- hypothesis ---

def test_hypothesis_examples():
    f7 = make_field(-7)
    assert check_hypothesis(f7, 9).ok
    rep = check_hypothesis(f7, 3)
    assert rep.ok and rep.degree == 4 and sum(rep.subfield_degrees) == 1
    assert not check_hypothesis(f7, 1).ok  # f = O_K excluded


def test_hypothesis_equivalent_test_agrees_on_odd_composites():
    for d in (-7, -39, -40):
        f = make_field(d)
        for n in (15, 21, 35, 45):
            rep = check_hypothesis(f, n)
            if rep.alt_ok is None:
                continue
            assert rep.ok == rep.alt_ok, (d, n, rep)


def test_hypothesis_report_contents():
    rep = check_hypothesis(make_field(-7), 15)
    assert rep.degree == 96
    assert rep.alt_sum == F(1, 8) + F(1, 24)
    assert rep.ok and rep.alt_ok
