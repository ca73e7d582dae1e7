import random

import pytest

from padtors.padic import INF, PadicNumber, PrecisionError
from padtors.elliptic import (CurvePoint, SingularCurveError,
                              WeierstrassCurve)

from conftest import (pad, random_kernel_point, random_point, random_unit,
                      signed_residue)


def two_torsion(curve, x):
    return curve.point(PadicNumber.from_int(x, 5, 40),
                       PadicNumber.exact_zero(5))


# -- construction -------------------------------------------------------------

def test_singular_rejected():
    with pytest.raises(SingularCurveError):
        WeierstrassCurve(PadicNumber.exact_zero(5), PadicNumber.exact_zero(5))


def test_j_invariant_relation(curve_mx):
    # j * disc = (-48 a4)^3, and j = 1728 for y^2 = x^3 - x
    E = curve_mx
    assert (E.j_inv * E.disc - (E.a4 * -48)**3).is_zero_like()
    assert E.j_inv.matches(1728)


def test_point_validation(curve_mx):
    with pytest.raises(ValueError):
        curve_mx.point(pad(2), pad(2))


# -- group law -------------------------------------------------------------------

def test_identity_and_negation(curve_mx):
    P = two_torsion(curve_mx, 0)
    inf = CurvePoint.infinity()
    assert curve_mx.add(P, inf) is P
    assert curve_mx.add(inf, P) is P
    N = curve_mx.neg(P)
    assert curve_mx.add(P, N).is_infinity


def test_two_torsion_doubles_to_infinity(curve_mx):
    P = two_torsion(curve_mx, 0)
    assert curve_mx.smul(2, P).is_infinity


def test_chord_between_two_torsion_points(curve_mx):
    # brute-force derived: (0,0) + (1,0) on y^2 = x^3 - x is (-1, 0)
    R = curve_mx.add(two_torsion(curve_mx, 0), two_torsion(curve_mx, 1))
    assert R.x.matches(-1)
    assert R.y.is_zero_like()


def test_group_laws_on_random_points(curve_mx, rng):
    for _ in range(8):
        P = random_point(curve_mx, rng, 30)
        Q = random_point(curve_mx, rng, 30)
        R = random_point(curve_mx, rng, 30)
        ab = curve_mx.add(curve_mx.add(P, Q), R)
        ba = curve_mx.add(P, curve_mx.add(Q, R))
        if ab.is_infinity or ba.is_infinity:
            assert ab.is_infinity and ba.is_infinity
            continue
        assert (ab.x - ba.x).is_zero_like() and (ab.y - ba.y).is_zero_like()
        com = curve_mx.add(Q, P)
        got = curve_mx.add(P, Q)
        if not got.is_infinity:
            assert (got.x - com.x).is_zero_like()


def test_smul_against_repeated_addition(curve_mx, rng):
    P = random_point(curve_mx, rng, 30)
    acc = CurvePoint.infinity()
    for k in range(1, 7):
        acc = curve_mx.add(acc, P)
        Q = curve_mx.smul(k, P)
        if acc.is_infinity:
            assert Q.is_infinity
        else:
            assert (Q.x - acc.x).is_zero_like()


def test_ambiguous_branch_raises():
    E = WeierstrassCurve(pad(-1, prec=6), PadicNumber.exact_zero(5))
    P = random_point(E, random.Random(2), 6)
    # same x to precision but unrelated y's: cannot decide P+Q vs P-Q
    fuzzy = CurvePoint(P.x + PadicNumber.zero_mod(5, 6), P.y + 1)
    if not (fuzzy.y - P.y).is_zero_like() and not (fuzzy.y + P.y).is_zero_like():
        with pytest.raises(PrecisionError):
            E.add(P, fuzzy)


# -- exact order --------------------------------------------------------------------

def test_orders(curve_mx):
    assert curve_mx.exact_order(CurvePoint.infinity(), 5) == 1
    assert curve_mx.exact_order(two_torsion(curve_mx, 1), 5) == 2


def test_order_certificate_two_torsion(curve_mx):
    cert = curve_mx.order_certificate(two_torsion(curve_mx, 1), 2)
    assert cert.order == 2
    assert cert.cofactor_vals == ((2, 0),)


def test_not_torsion_reported(curve_mx, rng):
    # a random point is almost surely non-torsion
    P = random_kernel_point(curve_mx, rng, 40)
    assert curve_mx.exact_order(P, 12) is None


# -- division polynomials -----------------------------------------------------------

def test_psi_1_and_2(curve_mx):
    f1, y1 = curve_mx.division_polynomial(1)
    assert not y1 and [c.unit for c in f1.coeffs] == [1]
    f2, y2 = curve_mx.division_polynomial(2)
    assert y2 and [c.unit for c in f2.coeffs] == [1]


def test_psi_3_formula(curve_mx):
    # 3x^4 + 6 a4 x^2 + 12 a6 x - a4^2 with a4 = -1, a6 = 0
    f3, y3 = curve_mx.division_polynomial(3)
    assert not y3
    assert [signed_residue(c, 6) if c.unit else 0 for c in f3.coeffs] == \
        [-1, 0, -6, 0, 3]


def test_psi_roots_are_torsion_x(curve_mx, rng):
    # oracle cross-check: a root of psi_n gives a point killed by n
    from padtors.hensel import poly_roots_in_disk
    for n in (3, 4):
        fn, _ = curve_mx.division_polynomial(n)
        rep = poly_roots_in_disk(fn, 0, 30)
        for res in rep.roots:
            x = res.root if res.root.is_zero_like() else res.root.cap(38)
            rhs = curve_mx.rhs(x)
            if rhs.is_zero_like():
                y = PadicNumber.exact_zero(5)
            elif rhs.val % 2 == 0 and pow(rhs.unit, 2, 5) == 1:
                y = rhs.sqrt()
            else:
                continue
            P = curve_mx.point(x, y)
            assert curve_mx.smul(n, P).is_infinity


# -- elliptic logarithm ------------------------------------------------------------------

def test_log_of_infinity(curve_mx):
    assert curve_mx.log(CurvePoint.infinity()).is_exact_zero()


def test_log_series_normalization(curve_mx):
    u = curve_mx.log_series(16)
    assert (u.coefficient(1) - 1).is_zero_like()
    assert u.coefficient(2).is_zero_like()  # u = tau + 0*tau^2 + ...


def test_log_outside_kernel_rejected(curve_mx, rng):
    P = random_point(curve_mx, rng, 30)
    if not curve_mx.in_reduction_kernel(P):
        with pytest.raises(ValueError):
            curve_mx.log(P)


def test_log_doubling(curve_mx, rng):
    P = random_kernel_point(curve_mx, rng, 40)
    lhs = curve_mx.log(curve_mx.add(P, P))
    rhs = curve_mx.log(P) * 2
    d = lhs - rhs
    assert d.is_zero_like() and d.prec >= 20


def test_log_homomorphism(curve_mx, rng):
    for _ in range(6):
        P = random_kernel_point(curve_mx, rng, 40)
        Q = random_kernel_point(curve_mx, rng, 40, depth=2)
        d = curve_mx.log(curve_mx.add(P, Q)) - \
            (curve_mx.log(P) + curve_mx.log(Q))
        assert d.is_zero_like() and d.prec >= 40 - 6


def test_log_preserves_distances(curve_mx, rng):
    for _ in range(5):
        P = random_kernel_point(curve_mx, rng, 40)
        Q = random_kernel_point(curve_mx, rng, 40)
        dt = curve_mx.tau(P) - curve_mx.tau(Q)
        dl = curve_mx.log(P) - curve_mx.log(Q)
        if dt.is_zero_like() or dl.is_zero_like():
            continue
        assert dl.valuation() == dt.valuation()


# -- kernel of reduction --------------------------------------------------------------------

def test_multiple_into_kernel(curve_mx, rng):
    assert curve_mx.reduction_point_count() == 8
    for _ in range(5):
        P = random_point(curve_mx, rng, 40)
        m, Q = curve_mx.multiple_into_kernel(P)
        assert curve_mx.in_reduction_kernel(Q) and not Q.is_infinity
        # for good reduction m divides #E(F_p) * p^k
        mm = m
        for _ in range(4):
            if mm % 5 == 0:
                mm //= 5
        assert 8 % mm == 0 or mm % 5 == 0


def test_torsion_never_enters_kernel(curve_mx):
    with pytest.raises(ValueError):
        curve_mx.multiple_into_kernel(two_torsion(curve_mx, 1), bound=30)


def test_kernel_point_shortcut(curve_mx, rng):
    P = random_kernel_point(curve_mx, rng, 40)
    m, Q = curve_mx.multiple_into_kernel(P)
    assert m == 1 and Q is P


# -- torsion scan -------------------------------------------------------------------------------

def test_torsion_scan_order_bounds(curve_mx):
    records, warnings = curve_mx.torsion_scan(1, 0)
    assert records == []


def test_torsion_scan_max4(curve_mx):
    # brute-force oracle for psi_4 rational roots mod 5^6 (plus 2-torsion)
    f4, _ = curve_mx.division_polynomial(4)
    M = 5**6
    brute = set()
    for r in range(5):  # roots are simple: residues mod 5 determine classes
        v = 0
        acc = 0
        for c in reversed([signed_residue(cc, 6) if cc.unit else 0
                           for cc in f4.coeffs]):
            acc = acc * r + c
        if acc % 5 == 0:
            brute.add(r)
    records, warnings = curve_mx.torsion_scan(4, 0)
    assert not warnings
    by_order = {}
    for rec in records:
        by_order.setdefault(rec.n, []).append(rec)
    two = sorted(r.t.residue(1) if not r.t.is_zero_like() else 0
                 for r in by_order[2])
    assert two == [0, 1, 4]  # x in {0, 1, -1}
    four = sorted(r.t.residue(1) for r in by_order[4])
    assert four == sorted(brute & {2, 3})
    # every certified torsion point stays outside the kernel of reduction
    for rec in records:
        assert rec.t.val > -2


def test_torsion_scan_deterministic(curve_mx):
    a = curve_mx.torsion_scan(4, 0)[0]
    b = curve_mx.torsion_scan(4, 0)[0]
    assert [r.to_json() for r in a] == [r.to_json() for r in b]
