"""Short Weierstrass curves y^2 = x^3 + a4 x + a6 over Q_p.

Provides the chord-tangent group law with precision-aware branch decisions,
exact torsion-order certification, division polynomials (the independent
torsion oracle), the elliptic logarithm on the kernel of reduction, and a
certified torsion scan.

Branch decisions in the group law never guess: when two points agree in x to
working precision but their y's can neither be identified nor recognized as
opposite, a PrecisionError is raised instead of picking a chord or tangent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .padic import INF, PadicNumber, PrecisionError
from .series import PadicSeries
from .hensel import DiskRootReport, poly_roots_in_disk


class SingularCurveError(ValueError):
    """The discriminant vanishes to working precision."""


@dataclass(frozen=True)
class SingularFiber:
    """A rejected fiber: y^2 = x^3 + a4 x + a6 with disc = 0 (nodal here)."""
    a4: PadicNumber
    a6: PadicNumber
    node_x: Optional[PadicNumber] = None


class CurvePoint:
    __slots__ = ("x", "y")

    def __init__(self, x: Optional[PadicNumber], y: Optional[PadicNumber]):
        if (x is None) != (y is None):
            raise ValueError("affine points need both coordinates")
        self.x = x
        self.y = y

    @classmethod
    def infinity(cls) -> "CurvePoint":
        return cls(None, None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def to_json(self):
        if self.is_infinity:
            return "inf"
        return {"x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, obj) -> "CurvePoint":
        if obj == "inf":
            return cls.infinity()
        return cls(PadicNumber.from_json(obj["x"]), PadicNumber.from_json(obj["y"]))

    def __repr__(self):
        return "inf" if self.is_infinity else f"({self.x!r}, {self.y!r})"


@dataclass(frozen=True)
class OrderCertificate:
    """Evidence that a point has exact order n.

    ``res_val_x`` / ``res_val_y`` give the agreement precision of the
    (n-1)P = -P identification; ``cofactor_vals`` lists, per prime l | n,
    the valuation of x((n/l)P), witnessing those multiples stay affine with
    at least one certified digit.
    """
    order: int
    res_val_x: int
    res_val_y: int
    cofactor_vals: tuple[tuple[int, int], ...]
    scanned_all_below: bool

    def to_json(self) -> dict:
        fin = lambda v: None if v >= INF else v  # exact agreement -> null
        return {"order": self.order,
                "res_val_x": fin(self.res_val_x),
                "res_val_y": fin(self.res_val_y),
                "cofactor_checks": [{"l": l, "val_x": fin(v)}
                                    for l, v in self.cofactor_vals],
                "scanned_all_below": self.scanned_all_below}


@dataclass(frozen=True)
class TorsionRecord:
    n: int
    t: PadicNumber
    val_t: int
    certificate: OrderCertificate
    newton_trace: Optional[tuple] = None

    def to_json(self) -> dict:
        out = {"n": self.n, "t": self.t.to_json(),
               "val_t": None if self.val_t >= INF else self.val_t,
               "order_certificate": self.certificate.to_json()}
        if self.newton_trace is not None:
            out["newton_trace"] = [s.to_json() for s in self.newton_trace]
        return out


def _primes_dividing(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class WeierstrassCurve:
    __slots__ = ("p", "a4", "a6", "disc", "j_inv", "_log_cache", "_psi_cache")

    def __init__(self, a4: PadicNumber, a6: PadicNumber):
        if a4.p != a6.p:
            raise ValueError("coefficient prime mismatch")
        self.p = a4.p
        self.a4 = a4
        self.a6 = a6
        disc = (a4**3 * 4 + a6**2 * 27) * (-16)
        if disc.is_zero_like():
            raise SingularCurveError(
                "discriminant vanishes to working precision")
        self.disc = disc
        c4 = a4 * (-48)
        self.j_inv = c4**3 / disc
        # construction recheck: j * disc = c4^3
        if not (self.j_inv * disc - c4**3).is_zero_like():
            raise ArithmeticError("j-invariant normalization check failed")
        self._log_cache = {}
        self._psi_cache = None

    def rhs(self, x: PadicNumber) -> PadicNumber:
        return x**3 + self.a4 * x + self.a6

    def contains(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        return (P.y**2 - self.rhs(P.x)).is_zero_like()

    def point(self, x, y) -> CurvePoint:
        P = CurvePoint(x, y)
        if not self.contains(P):
            raise ValueError("point is not on the curve to working precision")
        return P

    def to_json(self) -> dict:
        return {"a4": self.a4.to_json(), "a6": self.a6.to_json(),
                "p": self.p, "prec": min(self.a4.prec, self.a6.prec)}

    def __repr__(self):
        return f"y^2 = x^3 + ({self.a4!r})*x + ({self.a6!r}) over Q_{self.p}"

    # -- group law ------------------------------------------------------------

    def neg(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        return CurvePoint(P.x, -P.y)

    def _double(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        if P.y.is_exact_zero():
            return CurvePoint.infinity()
        if P.y.is_precision_zero():
            raise PrecisionError("cannot double: y is indistinguishable from 0 "
                                 "(2-torsion ambiguity)")
        m = (P.x**2 * 3 + self.a4) / (P.y * 2)
        x3 = m**2 - P.x * 2
        y3 = m * (P.x - x3) - P.y
        return CurvePoint(x3, y3)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        dx = Q.x - P.x
        if not dx.is_zero_like():
            m = (Q.y - P.y) / dx
            x3 = m**2 - P.x - Q.x
            y3 = m * (P.x - x3) - P.y
            return CurvePoint(x3, y3)
        sy = Q.y + P.y
        dy = Q.y - P.y
        if sy.is_zero_like() and not dy.is_zero_like():
            return CurvePoint.infinity()
        if dy.is_zero_like() and not sy.is_zero_like():
            return self._double(P)
        # both zero-like: y = -y = 0 to precision
        if P.y.is_exact_zero() and Q.y.is_exact_zero():
            return CurvePoint.infinity()
        raise PrecisionError("cannot separate P + Q from P - Q at working "
                             "precision")

    def smul(self, k: int, P: CurvePoint) -> CurvePoint:
        if k < 0:
            return self.smul(-k, self.neg(P))
        R = CurvePoint.infinity()
        Q = P
        while k:
            if k & 1:
                R = self.add(R, Q)
            k >>= 1
            if k:
                Q = self._double(Q)
        return R

    # -- torsion order ------------------------------------------------------------

    def exact_order(self, P: CurvePoint, bound: int) -> Optional[int]:
        """Least n <= bound with nP = infinity, or None.

        Certification is by full scan: every multiple below n is checked
        affine, and nP = infinity is recognized from (n-1)P = -P.
        """
        if bound < 1:
            raise ValueError("bound must be >= 1")
        if P.is_infinity:
            return 1
        multiples = [P]
        for n in range(2, bound + 1):
            nxt = self.add(multiples[-1], P)
            if nxt.is_infinity:
                return n
            multiples.append(nxt)
        return None

    def order_certificate(self, P: CurvePoint, n: int) -> OrderCertificate:
        """Certify exact order n, recording the residual valuations."""
        if n == 1:
            if not P.is_infinity:
                raise ValueError("order 1 claimed for an affine point")
            return OrderCertificate(1, INF, INF, (), True)
        multiples = [P]
        for m in range(2, n):
            nxt = self.add(multiples[-1], P)
            if nxt.is_infinity:
                raise ValueError(f"point dies at {m} < {n}: not exact order {n}")
            multiples.append(nxt)
        A = multiples[-1]  # (n-1)P, must equal -P
        rx = A.x - P.x
        ry = A.y + P.y
        if not (rx.is_zero_like() and ry.is_zero_like()):
            raise ValueError(f"(n-1)P != -P: point is not {n}-torsion")
        cof = []
        for l in _primes_dividing(n):
            Q = multiples[n // l - 1]
            if Q.is_infinity:
                raise ValueError(f"(n/{l})P = infinity: order divides {n//l}")
            if Q.x.prec < 1:
                raise PrecisionError(f"(n/{l})P has no certified digit")
            cof.append((l, Q.x.val))
        return OrderCertificate(n, min(rx.prec, INF), min(ry.prec, INF),
                                tuple(cof), True)

    # -- division polynomials --------------------------------------------------------

    def division_polynomial(self, n: int) -> tuple[PadicSeries, bool]:
        """(f_n, has_y): psi_n = f_n(x) * (y if has_y else 1).

        f_2 is normalized to 1 on output (2-torsion is exactly y = 0); the
        recurrence cache keeps the classical 2.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        p = self.p
        if self._psi_cache is None:
            a, b = self.a4, self.a6
            one = PadicNumber.from_int(1, p)
            zero = PadicNumber.exact_zero(p)
            poly = lambda vals: PadicSeries.polynomial(p, vals)
            cubic = poly([b, a, zero, one])  # y^2 = this
            self._psi_cache = {
                0: poly([zero]),
                1: poly([one]),
                2: poly([PadicNumber.from_int(2, p)]),
                3: poly([-a**2, b * 12, a * 6, zero,
                         PadicNumber.from_int(3, p)]),
                4: poly([-(b**2 * 8 + a**3), -a * b * 4, -a**2 * 5, b * 20,
                         a * 5, zero, one]).scale(4),
                "g2": cubic.mul(cubic),
            }
        cache = self._psi_cache
        gsq = cache["g2"]

        def get(k: int) -> PadicSeries:
            if k in cache:
                return cache[k]
            m = k // 2
            if k % 2 == 1:
                if m % 2 == 0:
                    val = gsq.mul(get(m + 2)).mul(_pow3(get(m))) \
                        .sub(get(m - 1).mul(_pow3(get(m + 1))))
                else:
                    val = get(m + 2).mul(_pow3(get(m))) \
                        .sub(gsq.mul(get(m - 1)).mul(_pow3(get(m + 1))))
            else:
                bracket = get(m + 2).mul(get(m - 1).mul(get(m - 1))) \
                    .sub(get(m - 2).mul(get(m + 1).mul(get(m + 1))))
                val = get(m).mul(bracket).map_coeffs(lambda c: c / 2)
            cache[k] = val
            return val

        if n == 2:
            return PadicSeries.polynomial(p, [PadicNumber.from_int(1, p)]), True
        return get(n), n % 2 == 0

    # -- elliptic logarithm --------------------------------------------------------------

    def log_series(self, terms: int) -> PadicSeries:
        """u(tau) = tau + O(tau^2): the formal integral of dx/2y in tau = -x/y."""
        if terms in self._log_cache:
            return self._log_cache[terms]
        p = self.p
        # w(tau) solves w = tau^3 + a4*tau*w^2 + a6*w^3 (w = -1/y)
        tau = PadicSeries.monomial(p, 1)
        T = terms + 3
        w = tau.shift_x(2).truncated(T)  # tau^3, as a truncated series
        for _ in range((T // 4) + 2):
            w2 = w.mul(w, cap=T)
            w3 = w2.mul(w, cap=T)
            w = tau.mul(w2, cap=T).scale(self.a4) \
                   .add(w3.scale(self.a6)) \
                   .add(tau.shift_x(2)).truncated(T)
        x = tau.mul(w.reciprocal())            # x = tau/w, lead -2
        omega = x.derivative().mul(w).map_coeffs(lambda c: -c / 2)  # x'/(2y)
        u = omega.integrate()
        assert (u.coefficient(1) - 1).is_zero_like()
        self._log_cache[terms] = u
        return u

    def tau(self, P: CurvePoint) -> PadicNumber:
        if P.is_infinity:
            return PadicNumber.exact_zero(self.p)
        return -P.x / P.y

    def in_reduction_kernel(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        return not P.x.is_zero_like() and P.x.val <= -2

    def log(self, P: CurvePoint) -> PadicNumber:
        """Elliptic logarithm of a point in the kernel of reduction."""
        if P.is_infinity:
            return PadicNumber.exact_zero(self.p)
        if not self.in_reduction_kernel(P):
            raise ValueError("point is outside the kernel of reduction "
                             "(needs val(x) <= -2)")
        t = self.tau(P)
        prec = min(self.a4.prec, self.a6.prec, P.x.prec - P.x.val)
        terms = min(prec + 4, 2 * prec)
        return self.log_series(terms).eval_at(t)

    def multiple_into_kernel(self, P: CurvePoint,
                             bound: int | None = None) -> tuple[int, CurvePoint]:
        """Smallest m <= bound with mP affine in the kernel of reduction."""
        if self.in_reduction_kernel(P) and not P.is_infinity:
            return 1, P
        if bound is None:
            if not (self.disc.val == 0 and self.a4.val >= 0 and self.a6.val >= 0):
                raise ValueError("no default bound without good reduction")
            bound = self.reduction_point_count() * self.p
        Q = P
        for m in range(1, bound + 1):
            if not Q.is_infinity and self.in_reduction_kernel(Q):
                return m, Q
            Q = self.add(Q, P)
        raise ValueError(f"no multiple up to {bound} lands in the kernel "
                         "(torsion points never do)")

    def reduction_point_count(self) -> int:
        """#E~(F_p) by brute force (p is small)."""
        p = self.p
        a = self.a4.residue(1)
        b = self.a6.residue(1)
        count = 1  # infinity
        squares = {x * x % p for x in range(p)}
        for x in range(p):
            r = (x * x * x + a * x + b) % p
            if r == 0:
                count += 1
            elif r in squares:
                count += 2
        return count

    # -- torsion scan -------------------------------------------------------------------------

    def torsion_scan(self, max_order: int, disk_val: int,
                     scan_depth: int = 3) -> tuple[list[TorsionRecord],
                                                   list[dict]]:
        """Certified Q_p-rational torsion x-coordinates in p^disk_val * Z_p.

        Returns (records, warnings); unresolved residue classes from the root
        isolator are surfaced as warnings, never dropped.
        """
        if max_order < 1:
            raise ValueError("max_order must be >= 1")
        prec = min(self.a4.prec, self.a6.prec)
        seen: list[PadicNumber] = []
        records: list[TorsionRecord] = []
        warnings: list[dict] = []
        candidates: list[PadicSeries] = []
        if max_order >= 2:
            candidates.append(PadicSeries.polynomial(
                self.p, [self.a6, self.a4, PadicNumber.exact_zero(self.p),
                         PadicNumber.from_int(1, self.p)]))  # 2-torsion: y = 0
        for n in range(3, max_order + 1):
            fn, _ = self.division_polynomial(n)
            candidates.append(fn)
        for poly in candidates:
            report = poly_roots_in_disk(poly, disk_val, prec - 2,
                                        scan_depth=scan_depth)
            for uc in report.unresolved:
                warnings.append({"poly_degree": len(poly.coeffs) - 1,
                                 **uc.to_json()})
            for res in report.roots:
                x = res.root if res.root.is_zero_like() \
                    else res.root.cap(prec)
                if any((x - s).is_zero_like() for s in seen):
                    continue
                seen.append(x)
                rhs = self.rhs(x)
                if rhs.is_exact_zero():
                    y = rhs  # y = 0
                elif rhs.is_precision_zero():
                    y = PadicNumber.exact_zero(self.p)
                else:
                    if rhs.val % 2 or pow(rhs.unit, (self.p - 1) // 2,
                                          self.p) != 1:
                        continue  # x-coordinate of a point over a quadratic ext
                    y = rhs.sqrt()
                P = CurvePoint(x, y)
                order = self.exact_order(P, max_order)
                if order is None:
                    continue
                cert = self.order_certificate(P, order)
                records.append(TorsionRecord(order, x,
                                             x.val if x.unit else INF, cert))
        records.sort(key=lambda r: (r.n, r.t.val if r.t.unit else INF,
                                    r.t.unit))
        return records, warnings


def _pow3(s: PadicSeries) -> PadicSeries:
    return s.mul(s).mul(s)
