"""Truncated power and Laurent series over Q_p.

``coeffs[i]`` is the coefficient of ``x**(lead + i)``; the series is known
modulo ``O(x**trunc)``.  ``trunc == INF`` marks an exact polynomial (the tail
is identically zero, so it contributes no truncation error).  Coefficients
below ``lead`` are exactly zero by convention.

Truncation propagation:

* add: min of the truncations;
* mul: ``min(Tf + ord(g), Tg + ord(f))`` where ``ord`` is the order of the
  lowest coefficient not certified zero;
* compose (f after g, into the disk): ``min(Tf, Tg, Tf * ord(g))``.

The heavy kernels (convolution, composition, reversion, reciprocal, sqrt)
run on flat integer lists modulo ``p**W``, where ``W`` is the precision the
coefficient-level rules justify; everything else works coefficient-wise on
:class:`PadicNumber` so the per-coefficient precision ledger stays exact.
"""

from __future__ import annotations

from fractions import Fraction

from .padic import INF, PadicNumber, PrecisionError, check_prime


# -- flat integer kernels ----------------------------------------------------

def _conv(a: list[int], b: list[int], n: int, mod: int | None) -> list[int]:
    out = [0] * n
    for i, ai in enumerate(a):
        if ai == 0 or i >= n:
            continue
        top = min(n - i, len(b))
        for j in range(top):
            out[i + j] += ai * b[j]
    if mod is not None:
        out = [c % mod for c in out]
    return out


def _f_compose(f: list[int], g: list[int], n: int, mod: int | None) -> list[int]:
    # Horner; requires g[0] == 0.
    acc = [0] * n
    for ck in reversed(f):
        acc = _conv(acc, g, n, mod)
        acc[0] = (acc[0] + ck) % mod if mod is not None else acc[0] + ck
    return acc


def _f_recip(a: list[int], n: int, mod: int | None) -> list[int]:
    # 1 / (a0 + a1 x + ...), a0 a unit.
    if mod is not None:
        inv0 = pow(a[0], -1, mod)
    else:
        if abs(a[0]) != 1:
            raise ValueError("exact reciprocal needs leading coefficient ±1")
        inv0 = a[0]
    out = [0] * n
    out[0] = inv0 % mod if mod is not None else inv0
    for k in range(1, n):
        s = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            s += a[j] * out[k - j]
        out[k] = (-s * inv0) % mod if mod is not None else -s * inv0
    return out


def _f_revert(f: list[int], n: int, mod: int | None) -> list[int]:
    # Compositional inverse of f = f1 x + f2 x^2 + ..., f1 a unit.
    if mod is not None:
        inv1 = pow(f[1], -1, mod)
    else:
        if abs(f[1]) != 1:
            raise ValueError("exact reversion needs linear coefficient ±1")
        inv1 = f[1]
    fp = [i * c for i, c in enumerate(f)][1:]  # f'
    g = [0, inv1 % mod if mod is not None else inv1]
    m = 2
    while m < n:
        m = min(2 * m, n)
        gm = g + [0] * (m - len(g))
        err = _f_compose(f[:m], gm, m, mod)
        err[1] -= 1
        corr = _conv(err, _f_recip(_f_compose(fp[:m], gm, m, mod), m, mod),
                     m, mod)
        if mod is not None:
            g = [(gm[i] - corr[i]) % mod for i in range(m)]
        else:
            g = [gm[i] - corr[i] for i in range(m)]
    return g


class PadicSeries:
    __slots__ = ("p", "lead", "coeffs", "trunc")

    def __init__(self, p: int, coeffs, lead: int = 0, trunc: int | None = None):
        check_prime(p)
        coeffs = tuple(coeffs)
        for c in coeffs:
            if not isinstance(c, PadicNumber) or c.p != p:
                raise ValueError("coefficients must be PadicNumbers at the same prime")
        if trunc is None:
            trunc = lead + len(coeffs)
        if trunc < INF and trunc != lead + len(coeffs):
            raise ValueError("finite trunc must equal lead + len(coeffs)")
        if trunc <= lead and coeffs:
            raise ValueError(f"trunc {trunc} must exceed lead offset {lead}")
        self.p = p
        self.lead = lead
        self.coeffs = coeffs
        self.trunc = min(trunc, INF)

    # -- construction helpers --------------------------------------------------

    @classmethod
    def from_rationals(cls, p: int, prec: int, values, lead: int = 0,
                       trunc: int | None = None) -> "PadicSeries":
        """Coefficients given as Fractions/ints, capped at absolute prec."""
        coeffs = []
        for v in values:
            f = Fraction(v)
            coeffs.append(PadicNumber.from_rational(f.numerator, f.denominator,
                                                    p, prec)
                          if f else PadicNumber.exact_zero(p))
        return cls(p, coeffs, lead, trunc)

    @classmethod
    def polynomial(cls, p: int, values, lead: int = 0,
                   prec: int | None = None) -> "PadicSeries":
        """Exact polynomial (trunc = INF); int values stay exact unless capped."""
        coeffs = []
        for v in values:
            if isinstance(v, PadicNumber):
                coeffs.append(v)
            elif isinstance(v, int):
                coeffs.append(PadicNumber.from_int(v, p, prec))
            else:
                f = Fraction(v)
                if prec is None:
                    raise ValueError("non-integer polynomial coefficients need a prec")
                coeffs.append(PadicNumber.from_rational(f.numerator,
                                                        f.denominator, p, prec))
        return cls(p, coeffs, lead, INF)

    @classmethod
    def monomial(cls, p: int, k: int = 1) -> "PadicSeries":
        return cls(p, [PadicNumber.from_int(1, p)], lead=k, trunc=INF)

    # -- structure ----------------------------------------------------------------

    def coefficient(self, k: int) -> PadicNumber:
        """Coefficient of x^k; exactly zero below lead (and beyond a polynomial)."""
        if k < self.lead:
            return PadicNumber.exact_zero(self.p)
        i = k - self.lead
        if i < len(self.coeffs):
            return self.coeffs[i]
        if self.trunc >= INF:
            return PadicNumber.exact_zero(self.p)
        raise ValueError(f"coefficient of x^{k} is beyond O(x^{self.trunc})")

    @property
    def prec(self) -> int:
        """Common absolute precision: the minimum over the coefficients."""
        return min((c.prec for c in self.coeffs), default=INF)

    def effective_order(self) -> int:
        """Order of the lowest coefficient not certified to be zero."""
        for i, c in enumerate(self.coeffs):
            if not c.is_exact_zero():
                return self.lead + i
        return self.trunc

    def is_certified_zero(self) -> bool:
        return all(c.is_exact_zero() for c in self.coeffs)

    def is_integral(self) -> bool:
        return all(c.val >= 0 for c in self.coeffs if not c.is_exact_zero())

    def min_coeff_val(self) -> int:
        vals = [c.val for c in self.coeffs if not c.is_zero_like()]
        return min(vals, default=0)

    def truncated(self, T: int) -> "PadicSeries":
        if T >= self.trunc:
            return self
        if T <= self.lead:
            raise ValueError(f"cannot truncate to O(x^{T}) with lead {self.lead}")
        n = T - self.lead
        cs = list(self.coeffs[:n])
        if len(cs) < n:  # polynomial tail: exactly zero
            cs += [PadicNumber.exact_zero(self.p)] * (n - len(cs))
        return PadicSeries(self.p, cs, self.lead, T)

    def shift_x(self, k: int) -> "PadicSeries":
        """Multiply by x^k."""
        return PadicSeries(self.p, self.coeffs, self.lead + k,
                           self.trunc + k if self.trunc < INF else INF)

    def map_coeffs(self, fn) -> "PadicSeries":
        return PadicSeries(self.p, [fn(c) for c in self.coeffs], self.lead,
                           self.trunc)

    # -- ring operations --------------------------------------------------------------

    def _check(self, other: "PadicSeries") -> None:
        if not isinstance(other, PadicSeries) or other.p != self.p:
            raise ValueError("series prime mismatch")

    def add(self, other: "PadicSeries") -> "PadicSeries":
        self._check(other)
        lead = min(self.lead, other.lead)
        trunc = min(self.trunc, other.trunc)
        if trunc >= INF:
            hi = max(self.lead + len(self.coeffs),
                     other.lead + len(other.coeffs))
            n = hi - lead
        else:
            n = trunc - lead
        out = [self.coefficient(lead + i) + other.coefficient(lead + i)
               for i in range(n)]
        return PadicSeries(self.p, out, lead, trunc)

    def neg(self) -> "PadicSeries":
        return self.map_coeffs(lambda c: -c)

    def sub(self, other: "PadicSeries") -> "PadicSeries":
        return self.add(other.neg())

    def scale(self, c) -> "PadicSeries":
        if isinstance(c, int):
            c = PadicNumber.from_int(c, self.p)
        return self.map_coeffs(lambda a: a * c)

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.sub(other)

    def __neg__(self):
        return self.neg()

    def _flat(self, m: int, W: int) -> list[int]:
        """Integers c_i with coeff_i = c_i * p^m, each known mod p^(m+W)."""
        mod = self.p**W
        out = []
        for c in self.coeffs:
            if c.unit == 0:
                out.append(0)
            else:
                out.append(c.unit * self.p ** (c.val - m) % mod)
        return out

    def mul(self, other: "PadicSeries", cap: int | None = None) -> "PadicSeries":
        self._check(other)
        lead = self.lead + other.lead
        tf = self.trunc + other.effective_order() if self.trunc < INF else INF
        tg = other.trunc + self.effective_order() if other.trunc < INF else INF
        trunc = min(tf, tg, INF)
        if cap is not None:
            trunc = min(trunc, cap)
        if self.is_certified_zero() or other.is_certified_zero():
            n = 1 if trunc >= INF else trunc - lead
            if n <= 0:
                raise PrecisionError("product carries no known coefficients")
            zero = PadicNumber.exact_zero(self.p)
            return PadicSeries(self.p, [zero] * n, lead, trunc)
        if trunc >= INF:
            n = max(len(self.coeffs) + len(other.coeffs) - 1, 1)
        else:
            if trunc <= lead:
                raise PrecisionError(
                    f"product known modulo O(x^{trunc}) carries no coefficients")
            n = trunc - lead
        pf, pg = self.prec, other.prec
        mf = min(0, self.min_coeff_val())
        mg = min(0, other.min_coeff_val())
        base = mf + mg
        if pf >= INF and pg >= INF:
            a = [c.unit * self.p ** (c.val - mf) if c.unit else 0
                 for c in self.coeffs]
            b = [c.unit * self.p ** (c.val - mg) if c.unit else 0
                 for c in other.coeffs]
            ints = _conv(a, b, n, None)
            coeffs = [PadicNumber._make(self.p, base, c, INF) for c in ints]
            return PadicSeries(self.p, coeffs, lead, trunc)
        W = min(pf - mf, pg - mg)
        if W <= 0:
            raise PrecisionError("series product has no certified digits")
        ints = _conv(self._flat(mf, W), other._flat(mg, W), n, self.p**W)
        coeffs = [PadicNumber._make(self.p, base, c, base + W) for c in ints]
        return PadicSeries(self.p, coeffs, lead, trunc)

    def __mul__(self, other):
        if isinstance(other, PadicSeries):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    # -- composition and inverses --------------------------------------------------------

    def compose(self, g: "PadicSeries") -> "PadicSeries":
        """Substitute g into self; g must map into the open unit disk."""
        self._check(g)
        if self.lead < 0:
            raise ValueError("cannot compose a Laurent series")
        if g.lead < 0:
            raise ValueError("inner series has a pole at 0")
        c0 = g.coefficient(0)
        v0 = c0.val  # INF when the constant term is exactly zero
        if v0 < 1 and self.trunc < INF:
            raise ValueError("inner series has a unit constant term: "
                             "composition diverges")
        if v0 < INF and self.trunc < INF and not self.is_integral():
            raise ValueError("composition off the origin needs an integral "
                             "outer series")
        ordg = g.effective_order()
        if self.trunc >= INF:
            T = INF if len(self.coeffs) <= 1 else g.trunc
        elif ordg >= 1:
            T = min(self.trunc, g.trunc, self.trunc * ordg)
        else:
            T = min(self.trunc, g.trunc)
        acc = PadicSeries(self.p, [PadicNumber.exact_zero(self.p)], 0, INF)
        hi = self.lead + len(self.coeffs) - 1
        for k in range(hi, -1, -1):
            acc = acc.mul(g, cap=T if T < INF else None)
            ck = self.coefficient(k)
            acc = acc.add(PadicSeries(self.p, [ck], 0, INF))
        if v0 < INF and self.trunc < INF:
            fixed = [c.cap((self.trunc - (acc.lead + i)) * v0)
                     for i, c in enumerate(acc.coeffs)]
            acc = PadicSeries(self.p, fixed, acc.lead, acc.trunc)
        return acc

    def reciprocal(self, trunc: int | None = None) -> "PadicSeries":
        """1/f for f with a unit leading coefficient (after Laurent shift)."""
        k0 = None
        for i, c in enumerate(self.coeffs):
            if not c.is_exact_zero():
                k0 = i
                break
        if k0 is None:
            raise ZeroDivisionError("reciprocal of the zero series")
        c = self.coeffs[k0]
        if c.is_precision_zero():
            raise PrecisionError("leading coefficient indistinguishable from zero")
        if c.val != 0:
            raise ValueError(f"leading coefficient has valuation {c.val}, not a unit")
        ord0 = self.lead + k0
        if self.trunc >= INF:
            if trunc is None:
                raise ValueError("reciprocal of a polynomial needs a target trunc")
            T = trunc
        else:
            T = self.trunc - 2 * ord0
            if trunc is not None:
                T = min(T, trunc)
        n = T + ord0  # coefficient count of 1/(normalized f)
        if n <= 0:
            raise PrecisionError("reciprocal carries no known coefficients")
        a = [self.coeffs[k0 + j] if k0 + j < len(self.coeffs)
             else PadicNumber.exact_zero(self.p) for j in range(n)]
        W = self.prec - min(0, self.min_coeff_val())
        if W < INF and all(x.val >= 0 for x in a if not x.is_exact_zero()):
            if W <= 0:
                raise PrecisionError("no certified digits for reciprocal")
            mod = self.p**W
            flat = [x.unit * self.p**x.val % mod if x.unit else 0 for x in a]
            ints = _f_recip(flat, n, mod)
            out = [PadicNumber._make(self.p, 0, v, W) for v in ints]
        else:
            out = [PadicNumber.exact_zero(self.p)] * n
            out[0] = 1 / c
            for k in range(1, n):
                s = PadicNumber.exact_zero(self.p)
                for j in range(1, k + 1):
                    s = s + a[j] * out[k - j]
                out[k] = -s * out[0]
        return PadicSeries(self.p, out, -ord0, T)

    def sqrt(self, trunc: int | None = None) -> "PadicSeries":
        """Square root of a power series with constant term 1."""
        if self.lead > 0 or self.lead < 0:
            raise ValueError("series square root needs constant term 1")
        c0 = self.coefficient(0)
        dev = c0 - 1
        if not dev.is_zero_like():
            raise ValueError("series square root needs constant term 1")
        if self.trunc >= INF:
            if trunc is None:
                raise ValueError("sqrt of a polynomial needs a target trunc")
            T = trunc
        else:
            T = self.trunc if trunc is None else min(trunc, self.trunc)
        n = T
        a = [self.coefficient(k) for k in range(min(n, len(self.coeffs)))]
        a += [PadicNumber.exact_zero(self.p)] * (n - len(a))
        W = min(self.prec, dev.prec if dev.is_precision_zero() else INF)
        if W < INF and self.is_integral():
            mod = self.p**W
            inv2 = pow(2, -1, mod)
            flat = [x.unit * self.p**x.val % mod if x.unit else 0 for x in a]
            s = [0] * n
            s[0] = 1
            for k in range(1, n):
                acc = flat[k]
                for i in range(1, k):
                    acc -= s[i] * s[k - i]
                s[k] = acc * inv2 % mod
            out = [PadicNumber._make(self.p, 0, v, W) for v in s]
        else:
            out = [PadicNumber.from_int(1, self.p)] + \
                  [PadicNumber.exact_zero(self.p)] * (n - 1)
            for k in range(1, n):
                acc = a[k]
                for i in range(1, k):
                    acc = acc - out[i] * out[k - i]
                out[k] = acc / 2
        return PadicSeries(self.p, out, 0, T)

    def revert(self, trunc: int | None = None) -> "PadicSeries":
        """Compositional inverse g with g(f(x)) = f(g(x)) = x + O(x^T).

        Needs f(0) = 0, a unit linear coefficient and integral coefficients;
        the output is integral (checked) and verified two-sided.
        """
        c0 = self.coefficient(0)
        if self.lead < 0 or not c0.is_zero_like():
            raise ValueError("reversion needs f(0) = 0")
        c1 = self.coefficient(1)
        if c1.is_zero_like() or c1.val != 0:
            raise ValueError("linear coefficient is not a unit: "
                             "use scaled inversion (hensel module)")
        if not self.is_integral():
            raise ValueError("reversion contract covers integral series only")
        T = self.trunc
        if T >= INF:
            if trunc is None:
                raise ValueError("reversion of a polynomial needs a target trunc")
            T = trunc
        elif trunc is not None:
            T = min(T, trunc)
        n = T
        if n < 2:
            raise PrecisionError("reversion needs at least the linear term")
        f = [self.coefficient(k) for k in range(n)]
        W = self.prec
        if c0.is_precision_zero():
            W = min(W, c0.prec)
        if W >= INF:
            flat = [x.unit * self.p**x.val if x.unit else 0 for x in f]
            ints = _f_revert(flat, n, None)
            mod = None
        else:
            if W <= 0:
                raise PrecisionError("no certified digits for reversion")
            mod = self.p**W
            flat = [x.unit * self.p**x.val % mod if x.unit else 0 for x in f]
            ints = _f_revert(flat, n, mod)
        ident = [0] * n
        if n > 1:
            ident[1] = 1
        for side in (_f_compose(flat, ints, n, mod),
                     _f_compose(ints, flat, n, mod)):
            if side != ident:
                raise ArithmeticError("reversion self-check failed")
        prec_out = INF if mod is None else W
        out = [PadicNumber._make(self.p, 0, v, prec_out) for v in ints]
        out[0] = PadicNumber.exact_zero(self.p)  # g(0) = 0 by construction
        g = PadicSeries(self.p, out, 0, T)
        assert g.is_integral()
        return g

    # -- calculus ------------------------------------------------------------------------

    def derivative(self) -> "PadicSeries":
        out = []
        for i, c in enumerate(self.coeffs):
            k = self.lead + i
            out.append(c * k)
        lead = self.lead - 1
        if self.lead == 0:
            out = out[1:]
            lead = 0
        return PadicSeries(self.p, out, lead,
                           self.trunc - 1 if self.trunc < INF else INF)

    def integrate(self) -> "PadicSeries":
        """Antiderivative with constant 0; debits prec by val(k+1) per coefficient."""
        out = []
        for i, c in enumerate(self.coeffs):
            k = self.lead + i
            if k == -1:
                if not c.is_exact_zero():
                    raise ValueError("cannot integrate an x^-1 term")
                out.append(PadicNumber.exact_zero(self.p))
            else:
                out.append(c / (k + 1))
        lead = self.lead + 1
        if self.lead == 0:
            out = [PadicNumber.exact_zero(self.p)] + out
            lead = 0
        return PadicSeries(self.p, out, lead,
                           self.trunc + 1 if self.trunc < INF else INF)

    # -- evaluation -----------------------------------------------------------------------

    def eval_at(self, t: PadicNumber) -> PadicNumber:
        """Horner evaluation; the result is capped by the truncation-tail bound."""
        if not isinstance(t, PadicNumber) or t.p != self.p:
            raise ValueError("evaluation point prime mismatch")
        if self.trunc < INF and t.val <= 0:
            raise ValueError("truncated series only evaluate at val(t) >= 1")
        acc = PadicNumber.exact_zero(self.p)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        if self.lead != 0:
            acc = acc * t**self.lead
        if self.trunc < INF:
            bound = self.trunc * t.val + self.min_coeff_val()
            if bound < INF:
                if bound <= 0:
                    raise PrecisionError("truncation tail swamps every digit")
                acc = acc.cap(bound)
        return acc

    # -- wire format --------------------------------------------------------------------------

    def to_json(self) -> dict:
        return {"lead_offset": self.lead,
                "trunc": None if self.trunc >= INF else self.trunc,
                "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "PadicSeries":
        coeffs = [PadicNumber.from_json(c) for c in obj["coeffs"]]
        if not coeffs:
            raise ValueError("series JSON needs at least one coefficient")
        trunc = obj["trunc"] if obj["trunc"] is not None else INF
        return cls(coeffs[0].p, coeffs, obj["lead_offset"], trunc)

    def __repr__(self) -> str:
        inner = ", ".join(repr(c) for c in self.coeffs[:4])
        if len(self.coeffs) > 4:
            inner += ", ..."
        t = "inf" if self.trunc >= INF else self.trunc
        return f"PadicSeries(p={self.p}, lead={self.lead}, trunc={t}, [{inner}])"
