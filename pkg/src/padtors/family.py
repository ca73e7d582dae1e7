"""The degenerating family E_t and its torsion-parameter pipeline.

E_t: y^2 = (x - 1/12)^2 (x + 1/6) + t (x - x_s), with x_s = p/(1-p)^2 + 1/12.
Expanding gives the short Weierstrass coefficients

    A2(t) = -1/48 + t,      B2(t) = 1/864 - x_s * t,

linear in t (B2 is derived here by exact symbolic expansion, not transcribed).
The constant point s = (x_s, y_s), y_s = p(1+p)/(2(1-p)^3), lies on every
fiber.  The fiber at t = 0 is the nodal cubic and j(E_t) has a pole there,
so matching 1/j against the Tate family glues E_t to T_{phi(t)}:

    phi = (q from 1/j) o (1/j of E_t),    phi(t) = phi1 * t + O(t^2),

with phi1 = ±p/(1-p)^2 (the sign is measured from the exact expansion and
recorded; see the build output).  The curve-isomorphism scaling is
lambda = sqrt(beta/alpha) with alpha = A2/(a4 o phi), beta = B2/(a6 o phi);
alpha^3 = beta^2 is asserted, and lambda^4 (a4 o phi) = A2,
lambda^6 (a6 o phi) = B2 are rechecked coefficientwise.

The section lift onto G_m solves X(phi(t), z) = x_s / lambda(t)^2 by Newton
(seeded at z = p) and then verifies the full round trip, including the
y-coordinate, which pins the sign of lambda^3.  Solving phi(t) = shat(t)^n
produces the parameter t_n where the section is torsion of exact order n;
the order is certified independently on the Weierstrass side by the group
law, never by the Tate criterion alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .padic import INF, PadicNumber, PrecisionError
from .series import PadicSeries, _conv, _f_recip
from .elliptic import (CurvePoint, SingularFiber, TorsionRecord,
                       WeierstrassCurve)
from .hensel import HenselError, NewtonProblem, NewtonResult, newton_solve
from .tate import TateModel, build_tate_model


class CertificationError(RuntimeError):
    """An independent check (order, round trip, criteria agreement) failed."""


def _frac_conv(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            if i + j < n:
                out[i + j] += ai * bj
    return out


@dataclass(frozen=True)
class ShatValue:
    z: PadicNumber
    newton: NewtonResult
    lambda_sign: int  # +1 if lambda^3 y_T = y_s, -1 if the -lambda branch fired


class FamilyModel:
    __slots__ = ("p", "prec", "series_order", "tate", "A2_series", "B2_series",
                 "jinvE_series", "phi_series", "alpha_series", "beta_series",
                 "lambda_series", "section_x", "section_y", "phi1",
                 "jinv_sign", "_phi_prime")

    def __init__(self, p: int, prec: int, series_order: int):
        M = build_tate_model(p, prec, series_order)
        T = series_order

        # exact expansion of (x - 1/12)^2 (x + 1/6) in x
        a = Fraction(1, 12)
        nodal = _frac_conv(_frac_conv([-a, 1], [-a, 1], 4), [2 * a, 1], 4)
        assert nodal == [2 * a**3, -3 * a**2, Fraction(0), Fraction(1)]
        mu = Fraction(p, (1 - p)**2)
        xs = mu + a
        ys = Fraction(p * (1 + p), 2 * (1 - p)**3)
        assert ys**2 == (xs - a)**2 * (xs + Fraction(1, 6))  # section on E_t
        A2 = [nodal[1], Fraction(1)]        # -1/48 + t
        B2 = [nodal[0], -xs]                # 1/864 - x_s t

        # 1/j(E_t) as an exact t-expansion: Delta / c4^3
        c4t = [-48 * c for c in A2]
        c6t = [-864 * c for c in B2]
        c4cu = _frac_conv(_frac_conv(c4t, c4t, 4), c4t, 4)
        c6sq = _frac_conv(c6t, c6t, 4)
        delta = [(x - y) / 1728 for x, y in zip(c4cu, c6sq)]
        assert delta[0] == 0
        c4cu_int = [int(c) for c in c4cu]
        assert all(Fraction(v) == c for v, c in zip(c4cu_int, c4cu))
        rec = _f_recip(c4cu_int, T, None)
        jinvE = [sum(delta[j] * rec[k - j] for j in range(min(k + 1, 4)))
                 for k in range(T)]
        assert jinvE[0] == 0
        if jinvE[1] == mu:
            sign = 1
        elif jinvE[1] == -mu:
            sign = -1
        else:
            raise ArithmeticError(
                f"1/j(E_t) linear coefficient {jinvE[1]} is not ±{mu}")

        self.p = p
        self.prec = prec
        self.series_order = T
        self.tate = M
        self.jinv_sign = sign
        self.A2_series = PadicSeries.from_rationals(p, prec, A2, trunc=INF)
        self.B2_series = PadicSeries.from_rationals(p, prec, B2, trunc=INF)
        self.jinvE_series = PadicSeries.from_rationals(p, prec, jinvE, trunc=T)
        self.phi_series = M.q_of_jinv_series.compose(self.jinvE_series)
        self._phi_prime = self.phi_series.derivative()
        self.section_x = PadicNumber.from_rational(xs.numerator,
                                                   xs.denominator, p, prec + 8)
        self.section_y = PadicNumber.from_rational(ys.numerator,
                                                   ys.denominator, p, prec + 8)

        self.phi1 = self.phi_series.coefficient(1)
        mu_pad = PadicNumber.from_rational(mu.numerator, mu.denominator,
                                           p, prec)
        if not (self.phi1 - mu_pad * sign).is_zero_like():
            raise ArithmeticError("phi linear coefficient disagrees with the "
                                  "measured 1/j expansion")

        A1 = M.a4_series.compose(self.phi_series)
        B1 = M.a6_series.compose(self.phi_series)
        self.alpha_series = self.A2_series.mul(A1.reciprocal(trunc=T))
        self.beta_series = self.B2_series.mul(B1.reciprocal(trunc=T))
        for s in (self.alpha_series, self.beta_series):
            if not (s.coefficient(0) - 1).is_zero_like():
                raise ArithmeticError("alpha/beta constant term is not 1")
        a3 = _pow(self.alpha_series, 3)
        b2 = _pow(self.beta_series, 2)
        diff = a3.sub(b2)
        if not all(c.is_zero_like() for c in diff.coeffs):
            raise ArithmeticError(
                "alpha^3 != beta^2: the B2 sign derived from the family "
                "equation is inconsistent (first bad coefficient "
                f"{next(c for c in diff.coeffs if not c.is_zero_like())!r})")
        self.lambda_series = self.beta_series.mul(
            self.alpha_series.reciprocal(trunc=T)).sqrt()
        if not self.lambda_series.is_integral():
            raise ArithmeticError("lambda is not integral")
        lam4 = _pow(self.lambda_series, 4)
        lam6 = _pow(self.lambda_series, 6)
        for got, want in ((lam4.mul(A1), self.A2_series),
                          (lam6.mul(B1), self.B2_series)):
            bad = got.sub(want.truncated(got.trunc))
            if not all(c.is_zero_like() for c in bad.coeffs):
                raise ArithmeticError("lambda^4/lambda^6 scaling relations fail")

    # -- fibers ---------------------------------------------------------------

    def curve_at(self, t: PadicNumber):
        """E_t, or the SingularFiber record at t = 0."""
        if t.is_exact_zero():
            return SingularFiber(self.A2_series.coefficient(0),
                                 self.B2_series.coefficient(0),
                                 node_x=PadicNumber.from_rational(
                                     1, 12, self.p, self.prec))
        if t.is_precision_zero():
            raise PrecisionError("t is indistinguishable from 0: cannot "
                                 "certify a smooth fiber")
        if t.val < 1:
            raise ValueError("t must lie in the open unit disk (val >= 1)")
        return WeierstrassCurve(self.A2_series.eval_at(t),
                                self.B2_series.eval_at(t))

    def section_point(self) -> CurvePoint:
        return CurvePoint(self.section_x, self.section_y)

    # -- the lifted section -------------------------------------------------------

    def _z_of_t(self, t: PadicNumber,
                target_prec: int | None = None) -> NewtonResult:
        q = self.phi_series.eval_at(t)
        lam = self.lambda_series.eval_at(t)
        x_target = self.section_x / lam**2
        return self.tate.solve_z(x_target, q, target_prec)

    def shat(self, t: PadicNumber) -> ShatValue:
        """Evaluate the lifted section, with the full round-trip check."""
        q = self.phi_series.eval_at(t)
        lam = self.lambda_series.eval_at(t)
        nr = self.tate.solve_z(self.section_x / lam**2, q)
        z = nr.root
        pt = self.tate.uniformize(q, z)
        if not (lam**2 * pt.x - self.section_x).is_zero_like():
            raise CertificationError("x round trip failed for the lifted "
                                     "section")
        y_img = lam**3 * pt.y
        if (y_img - self.section_y).is_zero_like():
            sign = 1
        elif (y_img + self.section_y).is_zero_like():
            sign = -1  # -lambda branch: (-lam)^3 y lands on +y_s
        else:
            raise CertificationError(
                "y round trip failed for both ±lambda branches")
        return ShatValue(z, nr, sign)

    # -- order-n parameters ----------------------------------------------------------

    def solve_torsion_parameter(self, n: int,
                                target_prec: int | None = None
                                ) -> TorsionRecord:
        """t_n with phi(t_n) = shat(t_n)^n, certified of exact order n."""
        if n < 2:
            raise ValueError("order must be >= 2")
        if self.prec < n + 20:
            raise ValueError(f"prec {self.prec} < n + 20 = {n + 20}")
        p = self.p
        target = target_prec if target_prec is not None else self.prec - 8
        pn = PadicNumber.from_int(1, p, self.prec + n + 4).shift(n)
        seed = pn / self.phi1
        fd_step = max(20, n + 5)

        def F(t: PadicNumber) -> PadicNumber:
            return self.phi_series.eval_at(t) - self._z_of_t(t).root**n

        def Fp(t: PadicNumber) -> PadicNumber:
            # exact series derivative of phi; symmetric finite difference on
            # shat (truth error O(p^(2m-2)), suppressed by z^(n-1) below)
            h = PadicNumber.from_int(1, p).shift(fd_step)
            zp = self._z_of_t(t + h).root
            zm = self._z_of_t(t - h).root
            shat_d = ((zp - zm) / (h * 2)).cap(2 * fd_step - 2)
            z = self._z_of_t(t).root
            return (self._phi_prime.eval_at(t)
                    - z ** (n - 1) * n * shat_d)

        try:
            nr = newton_solve(NewtonProblem(eval=F, deriv=Fp, seed=seed,
                                            target_prec=target))
        except HenselError:
            nr = self._scan_fallback(n, F, Fp, target)
        t_n = nr.root

        # independent Weierstrass-side certification
        E = self.curve_at(t_n)
        s = E.point(self.section_x, self.section_y)
        order = E.exact_order(s, n)
        if order != n:
            raise CertificationError(
                f"group-law order is {order}, solver claimed {n}; newton "
                f"transcript: {nr.trace_json()}")
        cert = E.order_certificate(s, n)

        # Tate-side criterion must agree
        q = self.phi_series.eval_at(t_n)
        z = self._z_of_t(t_n).root
        tate_n = self.tate.torsion_order(q, z, n, cross_check=False)
        if tate_n != n:
            raise CertificationError(
                f"Tate torsion criterion gives {tate_n}, group law gives {n}")

        return TorsionRecord(n, t_n, t_n.valuation(), cert, nr.transcript)

    def _scan_fallback(self, n: int, F, Fp, target: int) -> NewtonResult:
        """Residue scan of p^(n-1) Z_p / p^(n+2), then Newton from the class."""
        p = self.p
        hits = []
        for r in range(1, p**3):
            t = PadicNumber.from_int(r, p, self.prec).shift(n - 1)
            if t.is_zero_like():
                continue
            if F(t).val >= n + 2:
                hits.append(t)
        if len(hits) != 1:
            raise HenselError(f"fallback scan found {len(hits)} root classes "
                              f"for n = {n}, expected 1")
        return newton_solve(NewtonProblem(eval=F, deriv=Fp, seed=hits[0],
                                          target_prec=target))

    def normalization_report(self, rec: TorsionRecord) -> dict:
        """Measured val/lead digit of t_n against both candidate normalizations."""
        p = self.p
        lead = rec.t.unit % p
        first_order_digit = (-(1 - p)**2) % p
        return {
            "measured": {"val": rec.val_t, "lead_digit": lead},
            "paper_normalization": {
                "val": rec.n, "lead_digit": 1,
                "holds": rec.val_t == rec.n and lead == 1},
            "first_order_normalization": {
                "val": rec.n - 1, "lead_digit": first_order_digit,
                "holds": rec.val_t == rec.n - 1 and lead == first_order_digit},
        }

    def accumulation_report(self, n_min: int, n_max: int) -> dict:
        """Records for n_min..n_max plus the accumulation summary."""
        if not 2 <= n_min <= n_max:
            raise ValueError("need 2 <= n_min <= n_max")
        records = [self.solve_torsion_parameter(n)
                   for n in range(n_min, n_max + 1)]
        vals = [r.val_t for r in records]
        increasing = all(b > a for a, b in zip(vals, vals[1:]))
        orders = [r.n for r in records]
        if not increasing:
            raise CertificationError(
                f"valuations {vals} are not strictly increasing")
        if len(set(orders)) != len(orders):
            raise CertificationError("duplicate certified orders")
        return {
            "p": self.p, "prec": self.prec, "series_order": self.series_order,
            "jinv_linear_sign": self.jinv_sign,
            "records": [r.to_json() for r in records],
            "normalizations": [self.normalization_report(r) for r in records],
            "summary": {
                "orders": orders,
                "valuations": vals,
                "strictly_increasing_valuations": increasing,
                "all_orders_distinct": True,
            },
        }


def _pow(s: PadicSeries, k: int) -> PadicSeries:
    out = s
    for _ in range(k - 1):
        out = out.mul(s)
    return out


def build_family_model(p: int, prec: int, series_order: int) -> FamilyModel:
    return FamilyModel(p, prec, series_order)


def separation_check(E: WeierstrassCurve, max_order: int, disk_val: int,
                     scan_depth: int = 3) -> dict:
    """Empirical separation report on a good-reduction curve.

    Scans certified torsion x-coordinates in the disk, reports the pairwise
    distances between parameters of different exact orders, and checks the
    record set is stable under a deeper rescan.
    """
    if E.disc.val != 0:
        raise ValueError("separation check expects good reduction "
                         f"(val(disc) = {E.disc.val})")
    records, warnings = E.torsion_scan(max_order, disk_val, scan_depth)
    pair_vals = []
    for i, a in enumerate(records):
        for b in records[i + 1:]:
            if a.n == b.n:
                continue
            d = a.t - b.t
            if d.is_zero_like():
                raise CertificationError(
                    f"parameters of orders {a.n} and {b.n} collide")
            pair_vals.append({"n1": a.n, "n2": b.n, "val": d.valuation()})
    max_val = max((pv["val"] for pv in pair_vals), default=None)
    deeper, deeper_warn = E.torsion_scan(max_order, disk_val, scan_depth + 2)
    same = (len(deeper) == len(records)
            and all((a.t - b.t).is_zero_like() and a.n == b.n
                    for a, b in zip(records, deeper)))
    if not same:
        raise CertificationError("rescan at deeper isolation changed the "
                                 "certified record set")
    return {
        "curve": E.to_json(),
        "max_order": max_order,
        "disk_val": disk_val,
        "records": [r.to_json() for r in records],
        "warnings": warnings,
        "pair_distance_vals": pair_vals,
        "min_separation_val": max_val,
        "epsilon": "inf" if max_val is None else f"{E.p}^-{max_val}",
        "separation_within_scan_depth": (max_val is None
                                         or max_val <= scan_depth),
        "stable_under_rescan": True,
    }
