"""Asymptotic binary differential equation, parabolic curve and flecnodal data.

The asymptotic directions of z = f(x, y) solve

    f_yy dy^2 + 2 f_xy dx dy + f_xx dx^2 = 0,

whose discriminant b^2 - ac cuts out the parabolic curve.  At a cusp of
Gauss the equation is smoothly equivalent to dy^2 + (-y + lam x^2) dx^2 with
lam = 6 c40 - 3/2 read off the reduced normal form; the sign chambers
lam < 0, 0 < lam < 1/16, lam > 1/16 give the folded saddle, node and focus.
Deeper classes map to the topological models of the one- and two-parameter
bifurcation lists through the scalars lam1, lam2, lam3 of the reduced jet.

The flecnodal curve of a hyperbolic point is computed by eliminating the
direction parameter: for lines close to the y-axis, the family
(x - u y, f - v y) degenerates along lambda = eta lambda = eta eta lambda = 0
with eta = u d/dx + d/dy; the first equation removes v, the second is the
direction field f_yy + 2 u f_xy + u^2 f_xx = 0 solved for u(x, y) as an
exact series, and the third becomes the branch equation

    f_yyy + 3 u f_xyy + 3 u^2 f_xxy + u^3 f_xxx = 0,

returned scaled by 1/6 so its expansion starts c13 x + 4 c04 y + ... in the
normalized coordinates.  The mirror family gives the second branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (IdenticallyZero, ImplicitSolveFailed, InsufficientOrder,
                     NotApplicable, NotHyperbolic, OrderTooLow)
from .classify import NormalFormResult, classify, reduce_to_normal_form
from .jets import (BivariateJet, MongeJet, TrivariateJet, compose_trunc,
                   solve_implicit)

_ZERO = Fraction(0)


@dataclass(frozen=True)
class BDEJet:
    """a dy^2 + 2 b dx dy + c dx^2 = 0 with jet coefficients."""

    a: BivariateJet
    b: BivariateJet
    c: BivariateJet

    @property
    def order(self) -> int:
        return self.a.order

    def discriminant(self) -> BivariateJet:
        return self.b * self.b - self.a * self.c


@dataclass(frozen=True)
class CurveJet:
    defining: BivariateJet
    singularity: str  # smooth | morse | cusp | worse


@dataclass(frozen=True)
class BdeLocalType:
    tag: str
    lam: Optional[Fraction] = None
    lam1: Optional[Fraction] = None
    lam2: Optional[Fraction] = None
    lam3: Optional[Fraction] = None


def asymptotic_bde(f: MongeJet, k: int) -> BDEJet:
    """Second-derivative coefficients (f_yy, f_xy, f_xx) truncated at k."""
    if f.order < k + 2:
        raise OrderTooLow(f"need surface order >= {k + 2} for a BDE of order {k}")
    return BDEJet(f.jet.derivative("y").derivative("y").truncate(k),
                  f.jet.derivative("x").derivative("y").truncate(k),
                  f.jet.derivative("x").derivative("x").truncate(k))


def pullback(bde: BDEJet, sx: BivariateJet, sy: BivariateJet, k: int) -> BDEJet:
    """The equation in new coordinates (x, y) = (sx, sy) of the old ones."""
    xx, xy = sx.derivative("x").extend(k), sx.derivative("y").extend(k)
    yx, yy = sy.derivative("x").extend(k), sy.derivative("y").extend(k)
    a = compose_trunc(bde.a, sx, sy, k)
    b = compose_trunc(bde.b, sx, sy, k)
    c = compose_trunc(bde.c, sx, sy, k)
    new_a = a * yy * yy + 2 * b * xy * yy + c * xy * xy
    new_b = a * yx * yy + b * (xx * yy + xy * yx) + c * xx * xy
    new_c = a * yx * yx + 2 * b * xx * yx + c * xx * xx
    return BDEJet(new_a.truncate(k), new_b.truncate(k), new_c.truncate(k))


def classify_curve_jet(defining: BivariateJet) -> CurveJet:
    """Singularity of the zero set at the origin by exact low-order tests."""
    h = defining
    if any(h.coeff(i, j) != 0 for (i, j) in ((1, 0), (0, 1))):
        return CurveJet(h, "smooth")
    q20, q11, q02 = h.coeff(2, 0), h.coeff(1, 1), h.coeff(0, 2)
    disc = q11 * q11 - 4 * q20 * q02
    if disc != 0:
        return CurveJet(h, "morse")
    if q20 != 0 or q11 != 0 or q02 != 0:
        # rank one: the kernel line of the quadratic part
        v = (-q11, 2 * q20) if q20 != 0 else (Fraction(1), Fraction(0))
        cubic = sum(c * v[0] ** i * v[1] ** j
                    for (i, j), c in h.coeffs.items() if i + j == 3)
        if cubic != 0:
            return CurveJet(h, "cusp")
    return CurveJet(h, "worse")


def parabolic_curve(f: MongeJet, k: int) -> CurveJet:
    """Discriminant b^2 - a c of the asymptotic equation, with its
    singularity class; raises IdenticallyZero when it truncates away."""
    bde = asymptotic_bde(f, k)
    delta = bde.discriminant().truncate(k)
    if delta.is_zero():
        raise IdenticallyZero(f"discriminant vanishes to order {k}")
    return classify_curve_jet(delta)


_FOLDED_CLASSES = ("Π^p_{c,1}", "Π^p_{c,2}", "Π^p_{c,3}", "Π^p_{c,4}", "Π^p_{c,5}")


def folded_singularity(f: MongeJet, _reduced: NormalFormResult | None = None) -> BdeLocalType:
    """Davydov type of the equation at a parabolic point: the transversal
    stable model on the lips/beaks classes, or the folded singularity with
    lam = 6 c40 - 3/2 on the cusp-of-Gauss chain."""
    label = classify(f) if _reduced is None else _reduced.label
    if label.name.startswith("Π^p_{I"):
        return BdeLocalType("transverse-cibrario")
    if label.name not in _FOLDED_CLASSES:
        raise NotApplicable(f"no folded singularity for class {label.name}")
    res = _reduced or reduce_to_normal_form(f)
    c40 = res.normal.coeff(4, 0)
    lam = 6 * c40 - Fraction(3, 2)
    if lam == 0:
        return BdeLocalType("saddle-node-boundary", lam=lam)
    if lam == Fraction(1, 16):
        return BdeLocalType("node-focus-boundary", lam=lam)
    if lam < 0:
        return BdeLocalType("folded-saddle", lam=lam)
    if lam < Fraction(1, 16):
        return BdeLocalType("folded-node", lam=lam)
    return BdeLocalType("folded-focus", lam=lam)


def bde_bifurcation_type(f: MongeJet) -> BdeLocalType:
    """Topological model of the asymptotic equation for the degenerate
    parabolic and flat umbilic classes; defers to folded_singularity on the
    stable chains and reports unresolved when a genericity scalar vanishes."""
    label = classify(f)
    name = label.name
    if name.startswith("Π^p_{I") or name in ("Π^p_{c,1}", "Π^p_{c,4}", "Π^p_{c,5}"):
        return folded_singularity(f)
    if name == "Π^p_{c,2}":
        return BdeLocalType("well-folded-saddle-node", lam=_ZERO)
    if name == "Π^p_{c,3}":
        res = reduce_to_normal_form(f)
        if res.full.order < 6:
            raise InsufficientOrder(6)
        lam3 = res.full.coeff(6, 0) - Fraction(1, 2) * res.full.coeff(4, 1)
        if lam3 == 0:
            return BdeLocalType("unresolved", lam3=lam3)
        return BdeLocalType("folded-degenerate-elementary", lam3=lam3)
    if name == "Π^p_{v,1}":
        return BdeLocalType("nonversal-A3-morse")
    if name == "Π^p_{v,2}":
        res = reduce_to_normal_form(f)
        if res.full.order < 5:
            raise InsufficientOrder(5)
        n = res.full
        sgn = res.moduli["sign"]
        c50, c41, c32, c23 = (n.coeff(5, 0), n.coeff(4, 1), n.coeff(3, 2), n.coeff(2, 3))
        c31 = n.coeff(3, 1)
        lam1 = (sgn * 5 * c50 * c31 ** 3 + 12 * c41 * c31 ** 2
                + sgn * 24 * c32 * c31 + 32 * c23)
        if lam1 == 0:
            return BdeLocalType("unresolved", lam1=lam1)
        return BdeLocalType("cusp-type", lam1=lam1)
    if name == "Π^p_{v,3}":
        res = reduce_to_normal_form(f)
        lam2 = res.normal.coeff(3, 1)
        if lam2 == 0:
            return BdeLocalType("unresolved", lam2=lam2)
        return BdeLocalType("nontransverse-morse", lam2=lam2)
    if name == "Π^f_1":
        res = reduce_to_normal_form(f)
        return BdeLocalType("star" if res.moduli["sign"] > 0 else "one-saddle")
    if name == "Π^f_2":
        return BdeLocalType("flat-umbilic-cusp-type-2")
    raise NotApplicable(f"no bifurcation model for class {name}")


@dataclass(frozen=True)
class FlecnodalResult:
    """Branch jets of the flecnodal curve with the derived bifurcation flags.

    branches[0] comes from the family of view lines near the y-axis and
    branches[1] from the mirror family near the x-axis.  ``tangent`` is set
    when both branches are smooth (the tacnode condition, alpha beta = 16 in
    the doubly-degenerate normal form); ``morse`` is set when a branch is
    singular (nonzero Hessian of its quadratic part)."""

    branches: tuple
    tangent: Optional[bool] = None
    morse: Optional[bool] = None


def _direction_field(f: MongeJet, mirror: bool, k: int) -> BivariateJet:
    """Solve f_yy + 2 u f_xy + u^2 f_xx = 0 (or the mirror) for u(x, y)."""
    fj = f.jet
    fyy = fj.derivative("y").derivative("y").extend(k)
    fxy = fj.derivative("x").derivative("y").extend(k)
    fxx = fj.derivative("x").derivative("x").extend(k)
    a0, a2 = (fyy, fxx) if not mirror else (fxx, fyy)
    G = TrivariateJet(
        {(i, j, 0): c for (i, j), c in a0.coeffs.items()}
        | {(i, j, 1): 2 * c for (i, j), c in fxy.coeffs.items()}
        | {(i, j, 2): c for (i, j), c in a2.coeffs.items()}, k + 2)
    try:
        return solve_implicit(G, k)
    except Exception as exc:
        raise ImplicitSolveFailed(str(exc)) from exc


def flecnodal_branches(f: MongeJet, k: int) -> FlecnodalResult:
    """Branch jets of the flecnodal curve at a prenormalized hyperbolic
    point (2-jet proportional to xy), truncated at order k."""
    if f.coeff(2, 0) != 0 or f.coeff(0, 2) != 0 or f.coeff(1, 1) == 0:
        raise NotHyperbolic("need the asymptotic directions on the axes (2-jet ~ xy)")
    if f.order < k + 3:
        raise OrderTooLow(f"need surface order >= {k + 3} for branch order {k}")
    fj = f.jet
    third = {}
    for name in ("xxx", "xxy", "xyy", "yyy"):
        d = fj
        for v in name:
            d = d.derivative(v)
        third[name] = d.extend(k)
    branches = []
    for mirror in (False, True):
        u = _direction_field(f, mirror, k)
        seq = ("yyy", "xyy", "xxy", "xxx") if not mirror else ("xxx", "xxy", "xyy", "yyy")
        x = BivariateJet({(1, 0): 1}, k)
        acc = BivariateJet.zero(k)
        upow = BivariateJet({(0, 0): 1}, k)
        for m, nm in enumerate(seq):
            coef = [1, 3, 3, 1][m]
            acc = acc + coef * (third[nm] * upow)
            upow = (upow * u).truncate(k)
        defining = Fraction(1, 6) * acc.truncate(k)
        branches.append(classify_curve_jet(defining))
    tangent = None
    if all(br.singularity == "smooth" for br in branches):
        l1 = (branches[0].defining.coeff(1, 0), branches[0].defining.coeff(0, 1))
        l2 = (branches[1].defining.coeff(1, 0), branches[1].defining.coeff(0, 1))
        tangent = (l1[0] * l2[1] - l1[1] * l2[0]) == 0
    morse = None
    for br in branches:
        if br.singularity != "smooth":
            morse = br.singularity == "morse"
            break
    return FlecnodalResult(tuple(branches), tangent=tangent, morse=morse)
