import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padtors.padic import INF, PadicNumber, PrecisionError
from padtors.series import PadicSeries

from conftest import pad, signed_residue


def series(vals, p=5, prec=40, lead=0, trunc=None):
    return PadicSeries.from_rationals(p, prec, vals, lead=lead, trunc=trunc)


def ints(s, k=6):
    return [signed_residue(c, 6) if c.unit else 0 for c in s.coeffs]


# -- arithmetic ----------------------------------------------------------------

def test_mul_basic():
    f = PadicSeries.polynomial(5, [1, 1])
    g = PadicSeries.polynomial(5, [1, -1])
    assert ints(f.mul(g)) == [1, 0, -1]


def test_mul_laurent_forced_product():
    # (1/q + 744 + O(q)) * q  ->  1 + 744 q + O(q^2)
    f = series([1, 744], lead=-1, trunc=1)
    q = PadicSeries.monomial(5, 1)
    prod = f.mul(q)
    assert prod.lead == 0 and prod.trunc == 2
    assert ints(prod) == [1, 744]
    # against a truncated q + O(q^2) the honest rule only certifies O(q^1)
    qtrunc = series([0, 1], trunc=2)
    assert f.mul(qtrunc).trunc == 1


def test_add_zero_identity_and_principal_part():
    f = series([3, 1, 4], lead=-1, trunc=2)
    zero = PadicSeries.polynomial(5, [0])
    s = f.add(zero)
    assert s.lead == -1 and ints(s) == [3, 1, 4]


def test_mul_trunc_rule():
    f = series([1, 2], trunc=2)           # O(x^2)
    g = series([0, 0, 1, 1], trunc=4)     # order 2, O(x^4)
    # T' = min(Tf + ord g, Tg + ord f) = min(2 + 2, 4 + 0) = 4
    assert f.mul(g).trunc == 4


# -- composition ---------------------------------------------------------------------

def test_compose_polynomial():
    f = PadicSeries.polynomial(5, [0, 0, 1])        # x^2
    g = PadicSeries.polynomial(5, [0, 1, 1])        # x + x^2
    assert ints(f.compose(g)) == [0, 0, 1, 2, 1]


def test_compose_identity():
    f = series([7, 1, 3, 2], trunc=4)
    x = PadicSeries.monomial(5, 1)
    h = f.compose(x)
    assert [signed_residue(c, 6) for c in h.coeffs[:4]] == [7, 1, 3, 2]


def test_compose_trunc_rule():
    f = series([1, 1, 1, 1], trunc=4)
    g = series([0, 0, 1], trunc=3)  # order 2
    # T' = min(Tf, Tg, Tf * ord g) = min(4, 3, 8) = 3
    assert f.compose(g).trunc == 3


def test_compose_unit_constant_rejected():
    f = series([1, 1, 1], trunc=3)
    g = PadicSeries.polynomial(5, [1, 1])
    with pytest.raises(ValueError):
        f.compose(g)


# -- reciprocal and sqrt ------------------------------------------------------------------

def test_reciprocal_geometric():
    g = PadicSeries.polynomial(5, [1, -1])
    r = g.reciprocal(trunc=6)
    assert ints(r) == [1, 1, 1, 1, 1, 1]


def test_reciprocal_nonunit_leading():
    f = series([5, 1], trunc=2)
    with pytest.raises(ValueError):
        f.reciprocal()


def test_reciprocal_laurent():
    # 1/(x^-1 (1 - x)) = x (1 + x + ...)
    f = series([1, -1], lead=-1, trunc=1)
    r = f.reciprocal()
    assert r.lead == 1


def test_sqrt_one():
    s = series([1, 0, 0], trunc=3).sqrt()
    assert ints(s) == [1, 0, 0]


def test_sqrt_binomial_oracle():
    # binomial-series oracle for sqrt(1 + 4x): C(1/2, k) 4^k over Q
    def binom_half(k):
        out = Fraction(1)
        for i in range(k):
            out *= (Fraction(1, 2) - i) / (i + 1)
        return out
    want = [binom_half(k) * 4**k for k in range(4)]
    assert want[:3] == [1, 2, -2]
    f = series([1, 4, 0, 0], trunc=4)
    s = f.sqrt()
    assert s.is_integral()
    for k, w in enumerate(want):
        assert s.coefficient(k).matches(pad(w.numerator, w.denominator))
    sq = s.mul(s)
    for k in range(4):
        assert (sq.coefficient(k) - f.coefficient(k)).is_zero_like()


def test_sqrt_needs_constant_one():
    with pytest.raises(ValueError):
        series([4, 1], trunc=2).sqrt()


# -- reversion ------------------------------------------------------------------------------

def test_revert_identity():
    x = PadicSeries.monomial(5, 1)
    g = x.revert(trunc=5)
    assert ints(g) == [0, 1, 0, 0, 0]


def test_revert_signed_catalan():
    f = PadicSeries.polynomial(5, [0, 1, 1])  # x + x^2
    g = f.revert(trunc=5)
    assert ints(g) == [0, 1, -1, 2, -5]


def test_revert_x_plus_p_x2():
    f = PadicSeries.polynomial(5, [0, 1, 5])
    g = f.revert(trunc=3)
    assert g.is_integral()
    assert g.coefficient(1).residue(3) == 1
    assert (g.coefficient(2) + 5).residue(3) == 0  # g = x - 5x^2 mod (x^3, 5^3)


def test_revert_nonunit_linear():
    f = PadicSeries.polynomial(5, [0, 5, 1])
    with pytest.raises(ValueError, match="hensel"):
        f.revert(trunc=4)


def lagrange_oracle(coeffs, n):
    """g_k = [x^(k-1)] (x/f)^k / k for f with Fraction coefficients."""
    out = [Fraction(0), Fraction(1) / coeffs[1]]
    base = coeffs[1:]  # f/x
    for k in range(2, n):
        # (x/f)^k = (1/base)^k; need coefficient k-1
        inv = [Fraction(1) / base[0]]
        for m in range(1, k):
            s = sum(base[j] * inv[m - j] for j in range(1, min(m, len(base) - 1) + 1))
            inv.append(-s / base[0])
        powk = [Fraction(1)]
        for _ in range(k):
            nxt = [Fraction(0)] * k
            for i, a in enumerate(powk):
                for j, b in enumerate(inv):
                    if i + j < k:
                        nxt[i + j] += a * b
            powk = nxt
        out.append(powk[k - 1] / k)
    return out


@given(st.lists(st.integers(-9, 9), min_size=3, max_size=6))
@settings(max_examples=25, deadline=None)
def test_revert_matches_lagrange_inversion(tail):
    coeffs = [Fraction(0), Fraction(1)] + [Fraction(v) for v in tail]
    f = PadicSeries.polynomial(5, [0, 1] + tail)
    n = 8
    g = f.revert(trunc=n)
    want = lagrange_oracle(coeffs, n)
    for k in range(1, n):
        w = want[k]
        assert w.denominator == 1
        assert g.coefficient(k).matches(int(w))


@given(st.lists(st.integers(0, 5**6 - 1), min_size=2, max_size=10),
       st.integers(1, 4))
@settings(max_examples=40, deadline=None)
def test_revert_two_sided_on_random_integral_series(tail, u):
    if u % 5 == 0:
        u += 1
    f = PadicSeries(5, [PadicNumber.exact_zero(5),
                        PadicNumber.from_int(u, 5, 12)]
                    + [PadicNumber.from_int(v, 5, 12) for v in tail],
                    trunc=None)
    g = f.revert()
    assert g.is_integral()
    for comp in (f.compose(g), g.compose(f)):
        assert (comp.coefficient(1) - 1).is_zero_like()
        for k in list(range(1)) + list(range(2, comp.trunc)):
            assert comp.coefficient(k).is_zero_like()


# -- calculus ----------------------------------------------------------------------------------

def test_integrate_basics():
    one = PadicSeries.polynomial(5, [PadicNumber.from_int(1, 5, 10)])
    s = one.integrate()
    assert s.coefficient(0).is_exact_zero()
    assert s.coefficient(1).matches(1)


def test_integrate_precision_ledger():
    # integrating x^(p-1) divides by p: the coefficient loses exactly 1 digit
    f = PadicSeries(5, [PadicNumber.from_int(1, 5, 10)], lead=4, trunc=5)
    s = f.integrate()
    c = s.coefficient(5)
    assert c.val == -1 and c.prec == 10 - 1


def test_integrate_ledger_exact_for_every_index():
    coeffs = [PadicNumber.from_int(k + 1, 5, 20) for k in range(30)]
    f = PadicSeries(5, coeffs, trunc=30)
    s = f.integrate()
    for k in range(30):
        w = s.coefficient(k + 1)
        debit = 0
        m = k + 1
        while m % 5 == 0:
            debit += 1
            m //= 5
        assert w.prec == 20 - debit


def test_derive():
    f = PadicSeries.polynomial(5, [0, 0, 0, 1])
    assert ints(f.derivative()) == [0, 0, 3]


def test_derive_integrate_round_trip():
    f = series([3, 1, 4, 1, 5], trunc=5)
    back = f.integrate().derivative()
    for k in range(5):
        assert (back.coefficient(k) - f.coefficient(k)).is_zero_like()


# -- evaluation ------------------------------------------------------------------------------------

def test_eval_affine():
    f = PadicSeries.polynomial(5, [1, 1])
    v = f.eval_at(PadicNumber.from_int(5, 5, 20))
    assert v.matches(6)


def test_eval_zero_constant_series():
    f = series([0, 3, 1], trunc=3)
    assert f.eval_at(PadicNumber.exact_zero(5)).is_zero_like()


def test_eval_geometric_matches_rational():
    f = series([1] * 10, trunc=10)
    v = f.eval_at(PadicNumber.from_int(5, 5, 40))
    w = PadicNumber.from_rational(1, 1 - 5, 5, 4)
    assert v.prec >= 4
    assert (v.cap(4) - w).is_zero_like()
    assert v.residue(4) == 156


def test_eval_tail_bound():
    f = series([1] * 8, trunc=8)
    t = PadicNumber.from_int(25, 5, 40)
    v = f.eval_at(t)
    assert v.prec == 8 * 2  # trunc * val(t) + min coeff val


def test_eval_domain_checks():
    f = series([1, 1], trunc=2)
    with pytest.raises(ValueError):
        f.eval_at(PadicNumber.from_int(2, 5, 10))  # val 0 into truncated series


# -- wire format --------------------------------------------------------------------------------------

def test_series_json_round_trip():
    f = series([3, 0, 7], lead=-1, trunc=2)
    blob = json.dumps(f.to_json())
    g = PadicSeries.from_json(json.loads(blob))
    assert g.lead == f.lead and g.trunc == f.trunc
    for a, b in zip(f.coeffs, g.coeffs):
        assert a.matches(b) and a.prec == b.prec
