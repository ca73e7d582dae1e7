"""The Tate family T_q: y^2 = x^3 + a4(q) x + a6(q) over Q_p.

The q-expansions are built from the divisor-sum series s_k(q) of the standard
multiplicative-reduction model (y^2 + xy = x^3 - 5 s_3 x - (5 s_3 + 7 s_5)/12)
and then moved to short Weierstrass form by the affine-linear change of
coordinates (X, Y) -> (X + 1/12, Y + X/2), which yields

    a4(q) = -5 s_3(q) - 1/48,      a6(q) = -(7/12) s_5(q) + 1/864.

Construction happens in exact integer/rational arithmetic, so the three
leading-term identities (a4(0) = -1/48, a6(0) = 1/864, q*j = 1 + 744 q + ...)
are asserted exactly before anything is capped; a failure would mean the
transformation direction is wrong and raises with both candidates' leading
terms.

The uniformization X(q, z), Y(q, z) is evaluated numerically as a bilateral
sum with an explicit tail bound (the n-th block has valuation at least
n*val(q) - |val(z)|); general z is first reduced into the fundamental domain
0 <= val(z) < val(q) using q-periodicity.
"""

from __future__ import annotations

from fractions import Fraction

from .padic import INF, PadicNumber, PrecisionError, check_prime
from .series import PadicSeries, _conv, _f_recip
from .elliptic import CurvePoint, SingularFiber, WeierstrassCurve
from .hensel import NewtonProblem, NewtonResult, newton_solve


def _sigma(k: int, n: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


class TateModel:
    __slots__ = ("p", "prec", "series_order", "a4_series", "a6_series",
                 "jinv_series", "q_of_jinv_series", "_x0", "_one_twelfth")

    def __init__(self, p: int, prec: int, series_order: int):
        check_prime(p)
        if prec < 4:
            raise ValueError("prec must be at least 4")
        if series_order < 8:
            raise ValueError("series order must be at least 8")
        T = series_order
        s3 = [_sigma(3, n) for n in range(1, T)]
        s5 = [_sigma(5, n) for n in range(1, T)]

        a4_fr = [Fraction(-1, 48)] + [Fraction(-5 * v) for v in s3]
        a6_fr = [Fraction(1, 864)] + [Fraction(-7 * v, 12) for v in s5]

        # integer q-expansions of c4, c6, Delta
        c4 = [1] + [240 * v for v in s3]
        c6 = [-1] + [504 * v for v in s5]
        c4cu = _conv(_conv(c4, c4, T, None), c4, T, None)
        c6sq = _conv(c6, c6, T, None)
        delta_1728 = [a - b for a, b in zip(c4cu, c6sq)]
        if any(v % 1728 for v in delta_1728):
            raise ArithmeticError("discriminant is not integral: wrong "
                                  "transformation direction")
        delta = [v // 1728 for v in delta_1728]
        if delta[0] != 0 or delta[1] != 1:
            raise ArithmeticError(
                "Tate normalization check failed: Delta(q) leading terms "
                f"{delta[:2]} != [0, 1]; candidate shifts x±1/12, y±x/2 give "
                f"a4(0) = {a4_fr[0]} vs {a4_fr[0] + Fraction(1, 24)}")
        d1 = delta[1:] + [0]  # Delta/q
        qj = _conv(c4cu, _f_recip(d1, T, None), T, None)
        if qj[0] != 1 or qj[1] != 744:
            raise ArithmeticError(
                f"q*j(T_q) starts {qj[:2]}, expected [1, 744]: wrong "
                "transformation direction")
        jinv = [0] + _conv(d1, _f_recip(c4cu, T, None), T - 1, None)
        assert jinv[1] == 1  # unit linear coefficient: invertible by reversion

        self.p = p
        self.prec = prec
        self.series_order = T
        self.a4_series = PadicSeries.from_rationals(p, prec, a4_fr, trunc=T)
        self.a6_series = PadicSeries.from_rationals(p, prec, a6_fr, trunc=T)
        self.jinv_series = PadicSeries.from_rationals(p, prec, jinv, trunc=T)
        self.q_of_jinv_series = self.jinv_series.revert()
        self._one_twelfth = PadicNumber.from_rational(1, 12, p, prec + 8)
        self._x0 = (PadicNumber.from_rational(p, (1 - p)**2, p, prec + 8)
                    + self._one_twelfth)

    # -- curves --------------------------------------------------------------

    def x_origin(self) -> PadicNumber:
        """X(0, p) = p/(1-p)^2 + 1/12, the center of the solving disk."""
        return self._x0

    def curve_at(self, q: PadicNumber):
        if q.is_exact_zero():
            return SingularFiber(
                self.a4_series.coefficient(0), self.a6_series.coefficient(0),
                node_x=self._one_twelfth)
        if q.is_precision_zero():
            raise PrecisionError("q is indistinguishable from 0: cannot "
                                 "certify a smooth fiber")
        if q.val < 1:
            raise ValueError("q must lie in the open unit disk (val >= 1)")
        return WeierstrassCurve(self.a4_series.eval_at(q),
                                self.a6_series.eval_at(q))

    # -- uniformization ------------------------------------------------------

    def _reduce_z(self, q: PadicNumber, z: PadicNumber) -> PadicNumber:
        if z.is_zero_like():
            raise ValueError("z = 0 is not on G_m")
        z = z.cap(self.prec + z.val + 2)  # summation works at model precision
        if q.is_zero_like() or q.val >= INF:
            return z
        k = z.val // q.val
        if k:
            z = z / q**k
        return z

    def _blocks(self, q: PadicNumber, z: PadicNumber):
        """Yield (n, q^n*z, q^n/z, q^n) until the tail bound clears precision."""
        target = min(self.prec, q.prec, z.prec)
        qn = q
        n = 1
        while True:
            if qn.is_exact_zero():
                return
            if n * q.val - abs(z.val) > target + 2:
                return
            yield n, qn * z, qn / z, qn
            qn = qn * q
            n += 1

    def x_at(self, q: PadicNumber, z: PadicNumber) -> PadicNumber:
        """X(q, z) by bilateral summation; z is reduced mod q^Z first."""
        z = self._reduce_z(q, z)
        one = PadicNumber.from_int(1, self.p)
        omz = one - z
        if omz.is_zero_like():
            raise ValueError("z = 1 is the identity: X has a pole there "
                             "(request infinity explicitly)")
        acc = z / omz**2 + self._one_twelfth
        for n, wf, wb, qn in self._blocks(q, z):
            acc = acc + wf / (one - wf)**2
            acc = acc + wb / (one - wb)**2
            acc = acc - qn * (2 * n) / (one - qn)
        return self._tail_cap(acc, q, z)

    def y_at(self, q: PadicNumber, z: PadicNumber) -> PadicNumber:
        z = self._reduce_z(q, z)
        one = PadicNumber.from_int(1, self.p)
        omz = one - z
        if omz.is_zero_like():
            raise ValueError("z = 1 is the identity: Y has a pole there")
        acc = z * (one + z) / (omz**3 * 2)
        for n, wf, wb, _ in self._blocks(q, z):
            acc = acc + wf * (one + wf) / ((one - wf)**3 * 2)
            acc = acc - wb * (one + wb) / ((one - wb)**3 * 2)
        return self._tail_cap(acc, q, z)

    def dx_dz(self, q: PadicNumber, z: PadicNumber) -> PadicNumber:
        """dX/dz(q, z) = sum of q^n (1+q^n z)/(1-q^n z)^3 type blocks."""
        z = self._reduce_z(q, z)
        one = PadicNumber.from_int(1, self.p)
        acc = (one + z) / (one - z)**3
        zsq = z * z
        for n, wf, wb, qn in self._blocks(q, z):
            acc = acc + qn * (one + wf) / (one - wf)**3
            acc = acc - (qn / zsq) * (one + wb) / (one - wb)**3
        return self._tail_cap(acc, q, z)

    def _tail_cap(self, acc: PadicNumber, q: PadicNumber,
                  z: PadicNumber) -> PadicNumber:
        if q.is_exact_zero():
            return acc
        bound = min(self.prec, q.prec, z.prec) + 2
        return acc.cap(min(acc.prec, bound))

    def uniformize(self, q: PadicNumber, z: PadicNumber) -> CurvePoint:
        """eta_q(z) as an affine point (z not in q^Z)."""
        return CurvePoint(self.x_at(q, z), self.y_at(q, z))

    # -- torsion criterion ------------------------------------------------------

    def torsion_order(self, q: PadicNumber, z: PadicNumber,
                      max_n: int, cross_check: bool = True) -> int | None:
        """Least n <= max_n with z^n in q^Z (z torsion on T_q), else None.

        z^n lands in q^Z iff n*val(z) is a multiple of val(q) and the unit
        u = z^n q^(-n*val(z)/val(q)) is a root of unity, i.e. u^(p-1) = 1 to
        working precision.
        """
        if q.is_zero_like():
            raise ValueError("torsion criterion needs q != 0")
        if q.val < 1:
            raise ValueError("q must lie in the open unit disk")
        vq = q.valuation()
        vz = z.valuation()
        found = None
        for n in range(1, max_n + 1):
            if (n * vz) % vq:
                continue
            u = z**n / q ** ((n * vz) // vq)
            w = u ** (self.p - 1) - 1
            if w.is_zero_like():
                if w.prec < 4:
                    raise PrecisionError("root-of-unity test ran out of digits")
                found = n
                break
        if found is not None and cross_check:
            E = self.curve_at(q)
            P = self.uniformize(q, z)
            side = E.exact_order(P, found)
            if side != found:
                raise ArithmeticError(
                    f"torsion criteria disagree: z-side order {found}, "
                    f"group-law side {side}")
        return found

    # -- z from X ----------------------------------------------------------------

    def solve_z(self, x_target: PadicNumber, q: PadicNumber,
                target_prec: int | None = None) -> NewtonResult:
        """z near p with X(q, z) = x_target, by Newton with the exact dX/dz.

        The seed is z = p; the Hensel inequality is checked by newton_solve,
        which covers (and certifies) a wider domain than the stated
        p^4-neighborhood sufficient condition.
        """
        dx0 = x_target - self._x0
        if not dx0.is_zero_like() and dx0.val < 1:
            raise ValueError("x_target is outside the solving disk around "
                             "X(0, p)")
        if not q.is_zero_like() and q.val < 1:
            raise ValueError("q must lie in the open unit disk")
        if target_prec is None:
            target_prec = min(self.prec, x_target.prec) - 2
        seed = PadicNumber.from_int(self.p, self.p, self.prec + 4)
        return newton_solve(NewtonProblem(
            eval=lambda z: self.x_at(q, z) - x_target,
            deriv=lambda z: self.dx_dz(q, z),
            seed=seed, target_prec=target_prec))

    def leading_coefficients(self, k: int) -> dict:
        """First k coefficients of a4, a6, 1/j and q(1/j), JSON-ready."""
        k = min(k, self.series_order)
        cut = lambda s: [s.coefficient(i).to_json() for i in range(k)]
        return {"a4": cut(self.a4_series), "a6": cut(self.a6_series),
                "jinv": cut(self.jinv_series),
                "q_of_jinv": cut(self.q_of_jinv_series)}


def build_tate_model(p: int, prec: int, series_order: int) -> TateModel:
    return TateModel(p, prec, series_order)
