"""Capped-precision p-adic computation toolkit: Tate-curve uniformization,
Hensel solving, elliptic torsion certification, and the bad-fiber torsion
accumulation pipeline."""

from .padic import INF, PadicNumber, PrecisionError
from .series import PadicSeries
from .hensel import (HenselError, NewtonProblem, NewtonResult, NewtonStep,
                     finite_difference, newton_solve, poly_roots_in_disk)
from .elliptic import (CurvePoint, OrderCertificate, SingularCurveError,
                       SingularFiber, TorsionRecord, WeierstrassCurve)
from .tate import TateModel, build_tate_model
from .family import (CertificationError, FamilyModel, build_family_model,
                     separation_check)

__version__ = "0.1.0"

__all__ = [
    "INF", "PadicNumber", "PrecisionError", "PadicSeries",
    "HenselError", "NewtonProblem", "NewtonResult", "NewtonStep",
    "finite_difference", "newton_solve", "poly_roots_in_disk",
    "CurvePoint", "OrderCertificate", "SingularCurveError", "SingularFiber",
    "TorsionRecord", "WeierstrassCurve",
    "TateModel", "build_tate_model",
    "CertificationError", "FamilyModel", "build_family_model",
    "separation_check",
]
