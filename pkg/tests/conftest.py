import random

import pytest

from padtors.padic import PadicNumber
from padtors.elliptic import CurvePoint, WeierstrassCurve


def pad(num, den=1, p=5, prec=40):
    if num == 0:
        return PadicNumber.exact_zero(p)
    return PadicNumber.from_rational(num, den, p, prec)


def signed_residue(x: PadicNumber, k: int) -> int:
    """Value mod p^k mapped to (-p^k/2, p^k/2], for readable assertions."""
    r = x.residue(k)
    m = x.p**k
    return r - m if r > m // 2 else r


def random_unit(rng: random.Random, p: int, prec: int) -> PadicNumber:
    u = rng.randrange(1, p**prec)
    while u % p == 0:
        u = rng.randrange(1, p**prec)
    return PadicNumber.from_int(u, p, prec)


def random_point(E: WeierstrassCurve, rng: random.Random,
                 prec: int) -> CurvePoint:
    """A random affine point found by sampling x until the rhs is a square."""
    while True:
        x = PadicNumber.from_int(rng.randrange(0, E.p**prec), E.p, prec)
        rhs = E.rhs(x)
        if rhs.is_zero_like():
            return E.point(x, PadicNumber.exact_zero(E.p))
        if rhs.val % 2 == 0 and pow(rhs.unit, (E.p - 1) // 2, E.p) == 1:
            return E.point(x, rhs.sqrt())


def random_kernel_point(E: WeierstrassCurve, rng: random.Random, prec: int,
                        depth: int = 1) -> CurvePoint:
    """A point with val(x) = -2*depth: x = p^-2k * v^2 makes the rhs a square."""
    p = E.p
    v = random_unit(rng, p, 6)
    x = (v * v).cap(prec) / PadicNumber.from_int(p**(2 * depth), p)
    rhs = E.rhs(x)
    return E.point(x, rhs.sqrt())


@pytest.fixture
def rng():
    return random.Random(20240817)


@pytest.fixture(scope="session")
def curve_mx():
    """y^2 = x^3 - x over Q_5 at precision 40."""
    return WeierstrassCurve(PadicNumber.from_int(-1, 5, 40),
                            PadicNumber.exact_zero(5))
