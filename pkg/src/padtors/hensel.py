"""Numeric root finding in Q_p.

``newton_solve`` runs Newton iteration on a black-box function after the
scaling substitution x = seed + r*u, G = F/r^2 with r = F'(seed), which makes
the derivative a unit in u-space.  The Hensel inequality
val(F(seed)) > 2*val(F'(seed)) is checked up front, every step's residual
valuation is recorded, and the quadratic gain val(G(u+)) >= 2*val(G(u)) is
asserted rather than assumed.

``poly_roots_in_disk`` isolates the simple roots of a polynomial inside
p^v * Z_p by scanning residue classes and lifting each class that satisfies
the Hensel criterion; classes that cannot be resolved are reported, never
dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .padic import INF, PadicNumber, PrecisionError
from .series import PadicSeries


class HenselError(ArithmeticError):
    """The Hensel hypothesis fails at the seed, or the iteration stalls."""


@dataclass(frozen=True)
class NewtonStep:
    iteration: int
    val_residual: int
    val_step: int

    def to_json(self) -> dict:
        return {"iteration": self.iteration,
                "val_residual": self.val_residual,
                "val_step": self.val_step}


@dataclass(frozen=True)
class NewtonResult:
    root: PadicNumber
    transcript: tuple[NewtonStep, ...]

    def trace_json(self) -> list[dict]:
        return [s.to_json() for s in self.transcript]


@dataclass(frozen=True)
class NewtonProblem:
    eval: Callable[[PadicNumber], PadicNumber]
    deriv: Optional[Callable[[PadicNumber], PadicNumber]]
    seed: PadicNumber
    target_prec: int


def finite_difference(F, x: PadicNumber, step_val: int) -> PadicNumber:
    """Symmetric difference quotient at step p^step_val.

    The quotient carries eval_prec - step_val certified digits and deviates
    from F' by O(p^(2*step_val)); callers pick step_val so both clear their
    target.
    """
    h = PadicNumber.from_int(1, x.p).shift(step_val)
    d = (F(x + h) - F(x - h)) / (h * 2)
    return d.cap(2 * step_val)


def newton_solve(prob: NewtonProblem, max_iter: int = 64) -> NewtonResult:
    F, seed, target = prob.eval, prob.seed, prob.target_prec
    p = seed.p

    fa = F(seed)
    if fa.val >= target and fa.is_zero_like():
        return NewtonResult(seed, (NewtonStep(0, min(fa.val, INF), INF),))
    if prob.deriv is not None:
        deriv = prob.deriv
    else:
        def deriv(x, _F=F, _t=target):
            return finite_difference(_F, x, max(4, _t // 3))
    r = deriv(seed)
    if r.is_zero_like():
        raise HenselError("derivative at the seed is indistinguishable from zero")
    d = r.valuation()
    if fa.val <= 2 * d:
        raise HenselError(
            f"Hensel hypothesis fails: val(F(seed)) = {fa.val} "
            f"<= 2*val(F'(seed)) = {2 * d}")

    # u-space: x = seed + r*u, G(u) = F(x)/r^2; G'(0) is a unit.  Iterates
    # are re-pinned to a fixed working precision: they are chosen trial
    # points, and correctness rests on the certified final residual.
    W = max(seed.prec if seed.prec < INF else 0, target + 2 * d + 8)
    x = seed.with_prec(W)
    transcript = []
    prev_val_g = None

    def finish(k: int, val_f: int) -> NewtonResult:
        transcript.append(NewtonStep(k, min(val_f, INF), INF))
        root = x if val_f >= INF else x.cap(val_f - d)
        return NewtonResult(root, tuple(transcript))

    for k in range(max_iter):
        fx = fa if k == 0 else F(x)
        val_f = fx.val
        if fx.is_zero_like():
            if fx.prec >= target or fx.is_exact_zero():
                return finish(k, INF if fx.is_exact_zero() else fx.prec)
            raise PrecisionError(
                f"residual is O(p^{fx.prec}) but target is p^{target}: "
                "evaluations carry too little precision")
        if val_f >= target:
            return finish(k, val_f)
        val_g = val_f - 2 * d
        if prev_val_g is not None and val_g < 2 * prev_val_g:
            raise HenselError(
                f"convergence stalled at iteration {k}: val(G) went "
                f"{prev_val_g} -> {val_g}; transcript: "
                f"{[s.to_json() for s in transcript]}")
        prev_val_g = val_g
        fpx = deriv(x)
        step = fx / fpx
        x = (x - step).with_prec(W)
        transcript.append(NewtonStep(k, val_f, step.val))
    raise HenselError(f"no convergence within {max_iter} iterations; "
                      f"transcript: {[s.to_json() for s in transcript]}")


@dataclass(frozen=True)
class UnresolvedClass:
    residue: int
    depth: int
    val_f: int

    def to_json(self) -> dict:
        return {"residue": self.residue, "depth": self.depth,
                "val_f": self.val_f}


@dataclass(frozen=True)
class DiskRootReport:
    roots: tuple[NewtonResult, ...]
    unresolved: tuple[UnresolvedClass, ...]


def poly_roots_in_disk(poly: PadicSeries, disk_val: int, max_prec: int,
                       scan_depth: int = 3,
                       max_depth: int | None = None) -> DiskRootReport:
    """All simple roots of poly in p^disk_val * Z_p, each Hensel-certified."""
    p = poly.p
    if poly.is_certified_zero():
        raise ValueError("polynomial is zero to working precision")
    if max_depth is None:
        max_depth = scan_depth + 8
    # substitute x = p^disk_val * u so the disk becomes Z_p
    g = PadicSeries(p, [c.shift(disk_val * (poly.lead + i))
                        for i, c in enumerate(poly.coeffs)],
                    poly.lead, poly.trunc)
    gp = g.derivative()

    roots: list[NewtonResult] = []
    unresolved: list[UnresolvedClass] = []

    def value_at(f, r: int) -> PadicNumber:
        return f.eval_at(PadicNumber.from_int(r, p))

    def visit(residue: int, depth: int) -> None:
        u = value_at(g, residue)
        if u.val < depth:
            return  # no root in this class
        du = value_at(gp, residue)
        if not du.is_zero_like() and u.val > 2 * du.valuation():
            seed = PadicNumber.from_int(residue, p)
            res = newton_solve(NewtonProblem(
                eval=lambda t: g.eval_at(t),
                deriv=lambda t: gp.eval_at(t),
                seed=seed, target_prec=max_prec))
            roots.append(res)
            return
        if depth >= max_depth:
            unresolved.append(UnresolvedClass(residue, depth, min(u.val, INF)))
            return
        nxt = min(depth + 2, max_depth)
        for s in range(p ** (nxt - depth)):
            visit(residue + s * p**depth, nxt)

    for r in range(p**scan_depth):
        visit(r, scan_depth)

    # dedupe roots that agree to certified precision, keep deterministic order
    unique: list[NewtonResult] = []
    for res in roots:
        if not any((res.root - other.root).is_zero_like() for other in unique):
            unique.append(res)
    unique.sort(key=lambda r: (r.root.val if r.root.unit else INF,
                               r.root.unit))
    out = [NewtonResult(res.root.shift(disk_val), res.transcript)
           for res in unique]
    return DiskRootReport(tuple(out), tuple(unresolved))
