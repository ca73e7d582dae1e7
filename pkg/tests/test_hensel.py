import random

import pytest

from padtors.padic import INF, PadicNumber
from padtors.series import PadicSeries
from padtors.hensel import (HenselError, NewtonProblem, newton_solve,
                            poly_roots_in_disk)

from conftest import pad


def prob(F, dF, seed, target):
    return NewtonProblem(eval=F, deriv=dF, seed=seed, target_prec=target)


def test_newton_sqrt_six():
    # brute-force oracle: roots of x^2 = 6 mod 25 are 9 and 16
    roots25 = [r for r in range(25) if r * r % 25 == 6]
    assert sorted(roots25) == [9, 16]
    res = newton_solve(prob(lambda t: t * t - 6, lambda t: t * 2,
                            PadicNumber.from_int(1, 5, 30), 25))
    assert res.root.residue(1) == 1
    assert res.root.residue(2) == 16
    assert (res.root**2 - 6).val >= 25


def test_newton_linear_one_step():
    c = pad(7, 3, prec=30)  # 7/3 = 4 mod 5: seed 4 satisfies the Hensel check
    res = newton_solve(prob(lambda t: t - c, lambda t: pad(1),
                            PadicNumber.from_int(4, 5, 30), 25))
    assert (res.root - c).is_zero_like()
    assert len(res.transcript) <= 2


def test_newton_zero_like_residual_returns_seed():
    # F(seed) already vanishes to precision: the seed is the answer
    c = pad(3, prec=30)
    res = newton_solve(prob(lambda t: t - c, lambda t: pad(1),
                            pad(3, prec=30), 20))
    assert res.root.matches(3)


def test_hensel_hypothesis_checked():
    with pytest.raises(HenselError):
        newton_solve(prob(lambda t: t * t - 5, lambda t: t * 2,
                          PadicNumber.from_int(0, 5, 30), 20))


def test_quadratic_transcript_certificate():
    res = newton_solve(prob(lambda t: t * t - 6, lambda t: t * 2,
                            PadicNumber.from_int(1, 5, 40), 35))
    vals = [s.val_residual for s in res.transcript]
    d = 0  # val F'(seed) = val 2 = 0
    # the terminal entry may be a precision-floor lower bound, so the
    # doubling law is asserted on the non-terminal prefix
    for a, b in zip(vals[:-2], vals[1:-1]):
        assert b >= 2 * a - 2 * d
    assert vals[-1] >= 35


def test_nonunit_derivative_scaling():
    # F = (x - 15)(x - 35): derivative at the seed has valuation 1
    F = lambda t: (t - 15) * (t - 35)
    dF = lambda t: t * 2 - 50
    seed = PadicNumber.from_int(40, 5, 30)
    assert dF(seed).valuation() == 1
    assert F(seed).valuation() == 3  # 125: Hensel holds, 3 > 2
    res = newton_solve(prob(F, dF, seed, 22))
    assert res.root.residue(3) in (15, 35)
    # val(x* - seed) >= val F(seed) - val F'(seed)
    assert (res.root - 40).valuation() >= 3 - 1


def test_finite_difference_fallback():
    res = newton_solve(NewtonProblem(
        eval=lambda t: t * t - 6, deriv=None,
        seed=PadicNumber.from_int(1, 5, 40), target_prec=20))
    assert res.root.residue(2) == 16


def test_newton_tate_origin_case():
    # X(0, z) = z/(1-z)^2 + 1/12 equals 19/48 at z = p: one zero-like residual
    target = pad(19, 48, prec=30)
    one = PadicNumber.from_int(1, 5)

    def F(z):
        return z / (one - z)**2 + pad(1, 12, prec=30) - target

    res = newton_solve(NewtonProblem(
        eval=F, deriv=lambda z: (one + z) / (one - z)**3,
        seed=PadicNumber.from_int(5, 5, 30), target_prec=25))
    assert res.root.matches(5)
    assert len(res.transcript) == 1


# -- root isolation -------------------------------------------------------------

def capped_poly(vals, prec=30):
    return PadicSeries.polynomial(5, vals).map_coeffs(lambda c: c.cap(prec))


def test_roots_x2_minus_x():
    rep = poly_roots_in_disk(capped_poly([0, -1, 1]), 0, 25)
    assert len(rep.roots) == 2 and not rep.unresolved
    res = sorted(r.root.residue(1) if not r.root.is_zero_like() else 0
                 for r in rep.roots)
    assert res == [0, 1]


def test_roots_x2_minus_six():
    rep = poly_roots_in_disk(capped_poly([-6, 0, 1]), 0, 25)
    assert sorted(r.root.residue(2) for r in rep.roots) == [9, 16]


def test_roots_x2_minus_five_empty():
    rep = poly_roots_in_disk(capped_poly([-5, 0, 1]), 0, 25)
    assert not rep.roots


def test_roots_in_shifted_disk():
    # roots of (x - 5)(x - 30) inside 5 Z_5
    rep = poly_roots_in_disk(capped_poly([150, -35, 1]), 1, 25)
    got = sorted(r.root.residue(3) for r in rep.roots)
    assert got == [5, 30]


def test_double_root_reported_unresolved():
    rep = poly_roots_in_disk(capped_poly([1, -2, 1]), 0, 25)  # (x-1)^2
    assert not rep.roots
    assert rep.unresolved
    assert all(u.residue % 5 == 1 for u in rep.unresolved)


def test_roots_against_bruteforce_oracle():
    rng = random.Random(31)
    for _ in range(6):
        roots = rng.sample(range(-40, 40), 3)
        poly = [1]  # expand (x - r1)(x - r2)(x - r3)
        for r in roots:
            nxt = [0] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i] += -r * c
                nxt[i + 1] += c
            poly = nxt
        f = capped_poly(poly, prec=25)
        rep = poly_roots_in_disk(f, 0, 20)
        # brute-force oracle over residues mod 5^6
        M = 5**6
        def ev(x):
            acc = 0
            for c in reversed(poly):
                acc = (acc * x + c) % M
            return acc
        brute = {x % M for x in roots}
        assert {r.root.residue(6) for r in rep.roots} == brute
        for r in rep.roots:
            assert ev(r.root.residue(6)) % M == 0


def test_root_transcripts_present():
    rep = poly_roots_in_disk(capped_poly([-6, 0, 1]), 0, 25)
    for r in rep.roots:
        assert r.transcript  # convergence certificate attached
