"""Arithmetic in Q_p with capped absolute precision.

Every number tracks how many base-p digits of it are actually known.  A value
is stored as ``unit * p**val`` with the unit part reduced modulo
``p**(prec - val)``; ``prec`` is absolute: the value is known modulo
``p**prec``.  Three states exist:

* normal: ``unit`` coprime to p, ``val < prec``;
* zero mod p^N ("O(p^N)"): the outcome of a cancellation that left no
  certified digits.  Its valuation is only bounded below, and code that needs
  to *decide* anything about it raises :class:`PrecisionError` instead of
  guessing;
* exact zero: the additive identity, known to infinite precision.

Exact (infinite-precision) nonzero values are also representable when the
unit part is a plain integer; they arise from int operands and keep
arithmetic with small constants lossless.

Results never claim more precision than the operands justify: addition takes
the minimum absolute precision, multiplication and division combine relative
precisions through the valuation shifts.  Only primes p >= 5 are accepted.
"""

from __future__ import annotations

import re

INF = 1 << 30  # "infinite" precision / valuation sentinel, far above any cap


class PrecisionError(ArithmeticError):
    """No certified digits are left, or a decision needs digits that were lost."""


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if p in (2, 3):
        raise ValueError("p = 2 and p = 3 are not supported")


def _sqrt_mod_p(a: int, p: int) -> int:
    """A square root of a QR a modulo an odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


class PadicNumber:
    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val: int, unit: int, prec: int):
        # Raw constructor; use the factories or _make for normalization.
        self.p = p
        self.val = val
        self.unit = unit
        self.prec = prec

    # -- factories ---------------------------------------------------------

    @classmethod
    def exact_zero(cls, p: int) -> "PadicNumber":
        check_prime(p)
        return cls(p, INF, 0, INF)

    @classmethod
    def zero_mod(cls, p: int, prec: int) -> "PadicNumber":
        """The state O(p^prec): indistinguishable from zero at precision prec."""
        check_prime(p)
        if prec <= 0:
            raise PrecisionError(f"result known only modulo p^{prec}")
        return cls(p, prec, 0, prec)

    @classmethod
    def _make(cls, p: int, val: int, mantissa: int, prec: int) -> "PadicNumber":
        """Normalize mantissa * p^val known mod p^prec."""
        if prec >= INF:
            if mantissa == 0:
                return cls(p, INF, 0, INF)
            s = vp(mantissa, p)
            return cls(p, val + s, mantissa // p**s, INF)
        if prec <= 0:
            raise PrecisionError(f"result known only modulo p^{prec}")
        k = prec - val
        if k <= 0:
            return cls(p, prec, 0, prec)
        m = mantissa % p**k
        if m == 0:
            return cls(p, prec, 0, prec)
        s = vp(m, p)
        return cls(p, val + s, m // p**s, prec)

    @classmethod
    def from_int(cls, n: int, p: int, prec: int | None = None) -> "PadicNumber":
        check_prime(p)
        return cls._make(p, 0, n, INF if prec is None else prec)

    @classmethod
    def from_rational(cls, num: int, den: int, p: int, prec: int) -> "PadicNumber":
        """The image of num/den in Q_p, known modulo p^prec."""
        check_prime(p)
        if den == 0:
            raise ZeroDivisionError("denominator is zero")
        if prec <= 0:
            raise ValueError(f"precision must be positive, got {prec}")
        if num == 0:
            return cls.exact_zero(p)
        vn, vd = vp(num, p), vp(den, p)
        val = vn - vd
        rel = prec - val
        if rel <= 0:
            return cls.zero_mod(p, prec)
        u = (num // p**vn) * pow(den // p**vd, -1, p**rel)
        return cls._make(p, val, u, prec)

    # -- state predicates ----------------------------------------------------

    def is_exact_zero(self) -> bool:
        return self.unit == 0 and self.prec >= INF

    def is_precision_zero(self) -> bool:
        return self.unit == 0 and self.prec < INF

    def is_zero_like(self) -> bool:
        """True when no certified digit distinguishes the value from zero."""
        return self.unit == 0

    def is_exact(self) -> bool:
        return self.prec >= INF

    def valuation(self) -> int:
        """Exact valuation; raises on O(p^N), where only the bound N is known."""
        if self.is_precision_zero():
            raise PrecisionError(
                f"valuation undetermined: value is O({self.p}^{self.prec})")
        return self.val

    @property
    def rel_prec(self) -> int:
        return self.prec - self.val if self.unit else 0

    def __bool__(self) -> bool:
        if self.is_precision_zero():
            raise PrecisionError(
                f"cannot decide zero-ness of O({self.p}^{self.prec})")
        return self.unit != 0

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, int):
            return PadicNumber._make(self.p, 0, other, INF)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        if self.is_exact_zero():
            return b
        if b.is_exact_zero():
            return self
        p = self.p
        v = min(self.val, b.val)
        prec = min(self.prec, b.prec)
        mantissa = self.unit * p ** (self.val - v) + b.unit * p ** (b.val - v)
        return PadicNumber._make(p, v, mantissa, prec)

    __radd__ = __add__

    def __neg__(self):
        if self.unit == 0:
            return self
        return PadicNumber._make(self.p, self.val, -self.unit, self.prec)

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self + (-b)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        p = self.p
        if self.is_exact_zero() or b.is_exact_zero():
            return PadicNumber(p, INF, 0, INF)
        prec = min(self.prec + b.val, b.prec + self.val, INF)
        return PadicNumber._make(p, self.val + b.val, self.unit * b.unit, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        p = self.p
        if b.is_exact_zero():
            raise ZeroDivisionError("division by exact zero")
        if b.is_precision_zero():
            raise PrecisionError(
                f"division by O({p}^{b.prec}), indistinguishable from zero")
        if self.is_exact_zero():
            return self
        if self.is_precision_zero():
            return PadicNumber._make(p, self.val - b.val, 0, self.prec - b.val)
        rel = min(self.prec - self.val, b.prec - b.val)
        if rel >= INF:
            quot, rem = divmod(self.unit, b.unit)
            if rem == 0:
                return PadicNumber._make(p, self.val - b.val, quot, INF)
            raise ValueError("inexact division of two exact values; "
                             "cap one first")
        if rel < 1:
            raise PrecisionError("no certified digits for division")
        inv = pow(b.unit, -1, p**rel)
        val = self.val - b.val
        return PadicNumber._make(p, val, self.unit * inv, val + rel)

    def __rtruediv__(self, other):
        a = self._coerce(other)
        if a is NotImplemented:
            return a
        return a / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (PadicNumber.from_int(1, self.p) / self) ** (-k)
        result = PadicNumber.from_int(1, self.p)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def sqrt(self) -> "PadicNumber":
        """Square root with the first digit of the unit part in [1, (p-1)/2].

        Requires even valuation and a unit part that is a quadratic residue.
        """
        p = self.p
        if self.is_exact_zero():
            return self
        if self.is_precision_zero():
            raise PrecisionError("cannot take sqrt of O(p^N): parity of the "
                                 "valuation is unknown")
        if self.val % 2:
            raise ValueError(f"odd valuation {self.val}: no square root in Q_p")
        if pow(self.unit, (p - 1) // 2, p) != 1:
            raise ValueError(f"unit part {self.unit % p} mod {p} is not a square")
        if self.is_exact():
            from math import isqrt
            r = isqrt(abs(self.unit))
            if self.unit < 0 or r * r != self.unit:
                raise ValueError("exact value is not a perfect square; cap it first")
            if not 1 <= r % p <= (p - 1) // 2:
                r = -r
            return PadicNumber._make(p, self.val // 2, r, INF)
        rel = self.prec - self.val
        u = self.unit
        r = _sqrt_mod_p(u, p)
        if not 1 <= r % p <= (p - 1) // 2:
            r = p - r
        k = 1
        while k < rel:
            k = min(2 * k, rel)
            mod = p**k
            r = (r + u * pow(r, -1, mod)) * pow(2, -1, mod) % mod
        if not 1 <= r % p <= (p - 1) // 2:
            r = p**rel - r
        return PadicNumber._make(p, self.val // 2, r, self.prec - self.val // 2)

    # -- comparisons ---------------------------------------------------------

    def matches(self, other) -> bool:
        """True when no certified digit separates the two values."""
        b = self._coerce(other)
        if b is NotImplemented:
            raise TypeError(f"cannot compare PadicNumber with {type(other)}")
        return (self - b).is_zero_like()

    def __eq__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        d = self - b
        if d.is_exact_zero():
            return True
        if d.is_precision_zero():
            raise PrecisionError(
                f"equality undecidable: difference is O({self.p}^{d.prec}); "
                "use matches() for agreement to precision")
        return False

    __hash__ = None

    # -- precision plumbing ---------------------------------------------------

    def cap(self, prec: int) -> "PadicNumber":
        """Re-cap the absolute precision to at most prec."""
        if prec >= self.prec:
            return self
        return PadicNumber._make(self.p, self.val, self.unit, prec)

    def with_prec(self, prec: int) -> "PadicNumber":
        """The canonical representative of the known digits at precision prec.

        Truncates when prec is below the current precision and zero-extends
        when it is above.  Zero-extension is a choice, not knowledge: it is
        meant for trial points (Newton iterates) whose correctness is
        certified afterwards by a residual, never for measured quantities.
        """
        if self.is_exact_zero():
            return self
        return PadicNumber._make(self.p, self.val, self.unit, prec)

    def shift(self, k: int) -> "PadicNumber":
        """Exact multiplication by p^k."""
        if self.unit == 0:
            if self.is_exact_zero():
                return self
            return PadicNumber.zero_mod(self.p, self.prec + k)
        return PadicNumber(self.p, self.val + k, self.unit,
                           min(self.prec + k, INF))

    def residue(self, k: int) -> int:
        """The integer in [0, p^k) congruent to the value modulo p^k."""
        if self.val < 0:
            raise ValueError("negative valuation: not a p-adic integer")
        if self.prec < k:
            raise PrecisionError(f"known only mod p^{self.prec}, need p^{k}")
        if self.unit == 0:
            return 0
        return self.unit * self.p**self.val % self.p**k

    def digits(self) -> list[int]:
        """Base-p digits of the unit part, least significant first."""
        if self.unit == 0:
            return []
        if self.is_exact():
            raise ValueError("exact value has unbounded digits; cap it first")
        out = []
        u = self.unit
        for _ in range(self.prec - self.val):
            u, d = divmod(u, self.p)
            out.append(d)
        return out

    # -- wire formats ----------------------------------------------------------

    def to_json(self) -> dict:
        if self.is_exact_zero():
            return {"p": self.p, "val": None, "digits": [], "prec": None}
        if self.is_precision_zero():
            return {"p": self.p, "val": None, "digits": [], "prec": self.prec}
        return {"p": self.p, "val": self.val, "digits": self.digits(),
                "prec": self.prec}

    @classmethod
    def from_json(cls, obj: dict) -> "PadicNumber":
        p = obj["p"]
        check_prime(p)
        if obj["val"] is None:
            if obj["prec"] is None:
                return cls.exact_zero(p)
            return cls.zero_mod(p, obj["prec"])
        u = 0
        for d in reversed(obj["digits"]):
            u = u * p + d
        return cls._make(p, obj["val"], u, obj["prec"])

    def to_text(self) -> str:
        if self.is_exact_zero():
            return "0"
        if self.is_precision_zero():
            return f"O({self.p}^{self.prec})"
        if self.is_exact():
            return f"{self.p}^{self.val} * ({self.unit})"
        terms = []
        for i, d in enumerate(self.digits()):
            if d == 0:
                continue
            if i == 0:
                terms.append(str(d))
            elif i == 1:
                terms.append(f"{d}*{self.p}")
            else:
                terms.append(f"{d}*{self.p}^{i}")
        body = " + ".join(terms) if terms else "0"
        return f"{self.p}^{self.val} * ({body}) + O({self.p}^{self.prec})"

    _TEXT_RE = re.compile(
        r"^(\d+)\^(-?\d+) \* \((.*)\) \+ O\(\d+\^(-?\d+)\)$")

    @classmethod
    def from_text(cls, s: str) -> "PadicNumber":
        s = s.strip()
        if s == "0":
            raise ValueError("prime not recoverable from '0'; use JSON form")
        m = re.match(r"^O\((\d+)\^(-?\d+)\)$", s)
        if m:
            return cls.zero_mod(int(m.group(1)), int(m.group(2)))
        m = cls._TEXT_RE.match(s)
        if not m:
            raise ValueError(f"unparseable p-adic literal: {s!r}")
        p, val, body, prec = (int(m.group(1)), int(m.group(2)),
                              m.group(3), int(m.group(4)))
        u = 0
        if body != "0":
            for term in body.split(" + "):
                if "*" in term:
                    d, power = term.split("*", 1)
                    if "^" in power:
                        e = int(power.split("^")[1])
                    else:
                        e = 1
                    u += int(d) * p**e
                else:
                    u += int(term)
        return cls._make(p, val, u, prec)

    def __repr__(self) -> str:
        return self.to_text()
