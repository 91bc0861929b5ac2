"""Central projection germs, their degeneracy criteria and special viewpoints.

For a Monge surface z = f(x, y) and a viewpoint p off the base point, the
projection from p restricts to a plane-to-plane germ at the origin.  Finite
viewpoints use the chart ((y-b)/(x-a), (f-c)/(x-a)) with the image of the
base point subtracted; viewpoints at infinity give the parallel projection
(y - (b/a) x, f - (c/a) x).  When the leading coordinate of the viewpoint
vanishes the roles of the axes are exchanged, and a viewpoint off the
tangent plane falls back to the chart dividing by f - c, where the germ is
regular.

The module also evaluates the classical coefficient polynomials that locate
the special viewpoints on an asymptotic line of a parabolic point:

    C = c21^2 - 3 c30 c12        D = 3 c02 c30
    A = c21^2 c50 + 4 c12 c40^2 - 2 c21 c31 c40
    B = c21^2 c40 - 4 c02 c40^2
    S = 3 c02 c31^2 + 8 c40 (c12^2 - c02 c22)

The lips/beaks chain degenerates at a = -D/C, the gulls chain at a = -B/A,
and the quartic-contact chain at a = c02/c12, each possibly at infinity.
P, Q, R are read from the normalized special-viewpoint germ (the xy^3, xy^4
and xy^5 coefficients of the reduced form (y, x^3 + x P(y))); they are not
transcribed as closed polynomials.

Special viewpoints that the criteria do not locate in closed form are found
by an exact sweep: the viewpoint moves along the line with a rational
function parameter, the recognizer runs over Q(t), and the rational roots of
the decisive coefficient function are the special positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (ChartDegenerate, InternalError, MongeStrataError,
                     NoSpecialViewpoint, NotApplicable, NotParabolic,
                     OrderTooLow, ViewpointOnSurface)
from .fields import RatFunc, rational_roots
from .germs import (EquiType, GermAnalysis, PlaneGermJet, analyze_germ,
                    compose_germ, equisingularity_type, invert_germ,
                    prenormalize_germ)
from .jets import BivariateJet, MongeJet, inverse_unit

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Viewpoint:
    """A point of projective 3-space: finite (a, b, c) or a direction at
    infinity [a : b : c], stored with cleared denominators and positive
    leading entry."""

    coords: tuple
    at_infinity: bool = False

    @staticmethod
    def finite(a, b, c) -> "Viewpoint":
        return Viewpoint((a, b, c), False)

    @staticmethod
    def infinite(a, b, c) -> "Viewpoint":
        coords = [a, b, c]
        if all(isinstance(v, (int, Fraction)) for v in coords):
            coords = [Fraction(v) for v in coords]
            if all(v == 0 for v in coords):
                raise ValueError("direction at infinity cannot be zero")
            from math import gcd
            den = 1
            for v in coords:
                den = den * v.denominator // gcd(den, v.denominator)
            ints = [int(v * den) for v in coords]
            g = 0
            for v in ints:
                g = gcd(g, abs(v))
            ints = [v // g for v in ints]
            lead = next(v for v in ints if v != 0)
            if lead < 0:
                ints = [-v for v in ints]
            coords = [Fraction(v) for v in ints]
        return Viewpoint(tuple(coords), True)

    def __repr__(self):
        if self.at_infinity:
            return "Viewpoint[inf:%s:%s:%s]" % self.coords
        return "Viewpoint(%s, %s, %s)" % self.coords


def central_projection_jet(f: MongeJet, p: Viewpoint, k: int) -> PlaneGermJet:
    """Jet of the projection germ from p in the standard chart, order k."""
    if f.order < k:
        raise OrderTooLow(f"surface jet order {f.order} < requested germ order {k}")
    x = BivariateJet({(1, 0): 1}, k)
    y = BivariateJet({(0, 1): 1}, k)
    fj = f.jet.truncate(k)
    a, b, c = p.coords
    if p.at_infinity:
        if a != 0:
            return PlaneGermJet(y - (b / a) * x, fj - (c / a) * x)
        if b != 0:
            return PlaneGermJet(x, fj - (c / b) * y)
        # vertical direction: projection to the (x, y) plane
        return PlaneGermJet(x, y)
    if a == 0 and b == 0 and c == 0:
        raise ViewpointOnSurface("viewpoint coincides with the base point")
    if a != 0:
        num1, num2, den = y - b * _one(k), fj - c * _one(k), x - a * _one(k)
    elif b != 0:
        num1, num2, den = x - a * _one(k), fj - c * _one(k), y - b * _one(k)
    else:
        num1, num2, den = x - a * _one(k), y - b * _one(k), fj - c * _one(k)
    inv = inverse_unit(den, k)
    g1, g2 = num1 * inv, num2 * inv
    g1 = g1 - g1.coeff(0, 0) * _one(k)
    g2 = g2 - g2.coeff(0, 0) * _one(k)
    if (0, 0) in g1.coeffs or (0, 0) in g2.coeffs:
        raise ChartDegenerate("chart does not map the base point to the origin")
    return PlaneGermJet(g1, g2)


def _one(k: int) -> BivariateJet:
    return BivariateJet({(0, 0): 1}, k)


@dataclass(frozen=True)
class ParabolicInvariants:
    C: object
    D: object
    A: object
    B: object
    S: object
    P: Optional[object] = None
    Q: Optional[object] = None
    R: Optional[object] = None


def _require_parabolic_shape(f: MongeJet):
    if f.coeff(1, 1) != 0 or f.coeff(2, 0) != 0 or f.coeff(0, 2) == 0:
        raise NotParabolic("need a prenormalized parabolic jet (2-jet = c02 y^2)")


def parabolic_invariants(f: MongeJet, want_pqr: bool | None = None) -> ParabolicInvariants:
    """Evaluate C, D, A, B, S on a prenormalized parabolic jet; P, Q, R are
    read from the special-viewpoint germ when the lips/beaks chain applies.

    want_pqr=None computes P, Q, R exactly when c30 != 0; want_pqr=True
    additionally insists, raising NoSpecialViewpoint when the chain has no
    isolated special viewpoint.
    """
    _require_parabolic_shape(f)
    c02 = f.coeff(0, 2)
    c30, c21, c12 = f.coeff(3, 0), f.coeff(2, 1), f.coeff(1, 2)
    c40, c31, c22 = f.coeff(4, 0), f.coeff(3, 1), f.coeff(2, 2)
    c50 = f.coeff(5, 0)
    C = c21 * c21 - 3 * c30 * c12
    D = 3 * c02 * c30
    A = c21 * c21 * c50 + 4 * c12 * c40 * c40 - 2 * c21 * c31 * c40
    B = c21 * c21 * c40 - 4 * c02 * c40 * c40
    S = 3 * c02 * c31 * c31 + 8 * c40 * (c12 * c12 - c02 * c22)
    if want_pqr is True and c30 == 0:
        raise NoSpecialViewpoint(
            "P, Q, R need c30 != 0" if C != 0 or D != 0
            else "C = D = 0: no special viewpoint on the asymptotic line")
    if c30 == 0 or want_pqr is False:
        return ParabolicInvariants(C, D, A, B, S)
    vp = Viewpoint.infinite(1, 0, 0) if C == 0 else Viewpoint.finite(-D / C, 0, 0)
    germ = central_projection_jet(f, vp, f.order)
    series = i_chain_series(germ)
    P = series.get(3, _ZERO)
    Q = series.get(4, _ZERO) if f.order >= 5 else None
    R = series.get(5, _ZERO) if f.order >= 6 else None
    return ParabolicInvariants(C, D, A, B, S, P, Q, R)


def i_chain_series(germ: PlaneGermJet) -> dict:
    """Coefficients p_j of the reduced form (y, x^3 + x P(y)), P = sum p_j y^j.

    Requires the germ to sit in the lips/beaks family with removable x y^2
    term (the situation at the special viewpoint of the chain).
    """
    from .germs import to_y_h
    nz = to_y_h(germ)
    a30, a21, a12 = nz.a(3, 0), nz.a(2, 1), nz.a(1, 2)
    if a30 == 0:
        raise NotApplicable("germ cubic is not of x^3 type")
    if nz.a(2, 0) != 0 or nz.a(1, 1) != 0:
        raise NotApplicable("germ is not singular of cubic type")
    nz.src_x((0, 1), -a21 / (3 * a30))
    nz.kill_pure_y()
    nz.tgt_scale(1 / a30)
    for _ in range(300):
        target = None
        for (i, j), c in sorted(nz.pair.second.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            if i == 0 and j >= 2:
                target = (i, j, c)
                break
            if i >= 2 and i + j >= 4:
                target = (i, j, c)
                break
        if target is None:
            break
        i, j, c = target
        if i == 0:
            nz.kill_pure_y()
        else:
            nz.src_x((i - 2, j), -c / 3)
    else:
        raise InternalError("lips/beaks chain reduction did not terminate")
    return {j: c for (i, j), c in nz.pair.second.coeffs.items() if i == 1 and c != 0}


def _as_field(f: MongeJet, promote) -> MongeJet:
    return MongeJet(f.jet.map_coeffs(promote))


def _type_or_undetermined(f: MongeJet, vp: Viewpoint) -> EquiType:
    """Recognized type of the germ from vp; when the germ is deeper than the
    stored order can name, an 'undetermined' marker carrying the order that
    would decide it."""
    try:
        return equisingularity_type(central_projection_jet(f, vp, f.order))
    except OrderTooLow as e:
        return EquiType("undetermined", params={"reason": str(e)})


def _sweep_types(f: MongeJet, vp_of, candidates_extra=()) -> tuple[EquiType, list]:
    """Run the recognizer with a generic parameter along a viewpoint family.

    vp_of(t) must build the Viewpoint for parameter value t, where t is
    either the RatFunc generator (generic position) or a Fraction.  Returns
    the generic type and the list of (parameter, Viewpoint, EquiType) at the
    special positions: the rational roots and poles of the decisive
    coefficient where the recognized tag differs from the generic one.
    """
    t = RatFunc.var()
    f_t = _as_field(f, lambda c: RatFunc((c,)) if not isinstance(c, RatFunc) else c)
    germ_t = central_projection_jet(f_t, vp_of(t), f.order)
    generic = analyze_germ(germ_t)
    decisive = generic.decisive
    candidates: list[Fraction] = list(candidates_extra)
    if isinstance(decisive, RatFunc):
        if decisive.num:
            candidates += rational_roots(decisive.num)
        if len(decisive.den) > 1:
            candidates += rational_roots(decisive.den)
    specials = []
    seen = set()
    for t0 in candidates:
        if t0 in seen:
            continue
        seen.add(t0)
        vp0 = vp_of(Fraction(t0))
        try:
            et = _type_or_undetermined(f, vp0)
        except MongeStrataError:
            continue
        if et.tag != generic.etype.tag:
            specials.append((Fraction(t0), vp0, et))
    specials.sort(key=lambda s: s[0])
    return generic.etype, specials


def special_viewpoints(f: MongeJet) -> list[tuple[Viewpoint, EquiType]]:
    """Isolated viewpoints on the asymptotic line(s) where the projection
    degenerates beyond the generic type, paired with the observed type.

    Parabolic case (2-jet y^2, asymptotic line = x-axis): the single special
    viewpoint of the applicable chain, or [] when every viewpoint on the
    line behaves alike apart from chains the criteria do not locate.  Flat
    umbilic case: for each exceptional tangent line, a generic representative
    with the type seen along the line, followed by its special points.
    Hyperbolic points have no in-scope special viewpoints ([]); elliptic
    points admit none at all.
    """
    c20, c11, c02 = f.coeff(2, 0), f.coeff(1, 1), f.coeff(0, 2)
    disc = c11 * c11 - 4 * c20 * c02
    if c20 == 0 and c11 == 0 and c02 == 0:
        return _flat_umbilic_sweep(f)
    if disc > 0:
        return []
    if disc < 0:
        raise NotApplicable("elliptic points have no asymptotic lines")
    _require_parabolic_shape(f)

    def type_at(vp: Viewpoint) -> EquiType:
        return _type_or_undetermined(f, vp)

    inv = parabolic_invariants(f, want_pqr=False)
    c30, c21, c40 = f.coeff(3, 0), f.coeff(2, 1), f.coeff(4, 0)
    if c30 != 0:
        vp = Viewpoint.infinite(1, 0, 0) if inv.C == 0 else Viewpoint.finite(-inv.D / inv.C, 0, 0)
        return [(vp, type_at(vp))]
    if c21 != 0:
        if c40 != 0:
            if inv.B != 0:
                vp = Viewpoint.infinite(1, 0, 0) if inv.A == 0 else Viewpoint.finite(-inv.B / inv.A, 0, 0)
                return [(vp, type_at(vp))]
            if inv.A != 0:
                return []  # gulls from every viewpoint on the line
            # A = B = 0: the criteria leave the deeper special point implicit;
            # sweep the line with a generic parameter and solve exactly
            generic, specials = _sweep_types(f, _axis_viewpoint)
            out = [(vp, et) for (_t0, vp, et) in specials if _t0 != 0]
            inf_vp = Viewpoint.infinite(1, 0, 0)
            inf_type = type_at(inf_vp)
            if inf_type.tag != generic.tag:
                out.append((inf_vp, inf_type))
            return out
        return []  # quartic chain: the same type from every viewpoint
    # c30 = c21 = 0: special viewpoint of the flat-contact chain at c02/c12
    c12 = f.coeff(1, 2)
    vp = Viewpoint.infinite(1, 0, 0) if c12 == 0 else Viewpoint.finite(c02 / c12, 0, 0)
    return [(vp, type_at(vp))]


def _axis_viewpoint(t):
    if isinstance(t, RatFunc):
        return Viewpoint((t, RatFunc(0), RatFunc(0)), False)
    return Viewpoint.finite(t, 0, 0)


def _flat_umbilic_sweep(f: MongeJet) -> list[tuple[Viewpoint, EquiType]]:
    """Exceptional tangent lines of a flat umbilic point with their types.

    A tangent line is exceptional when the projection type from a generic
    position on it is deeper than the plane-generic lips/beaks.  Candidate
    slopes are the rational roots of the germ-cubic data along the direction:
    f3(1, m) (root directions of the cubic) and of the lips/beaks invariant
    3 a30 a12 - a21^2 as a polynomial in the slope.  Each candidate line is
    swept in the position parameter over Q(t); its generic type and the
    rational special positions are reported.  Lines whose special slope is
    irrational cannot be represented and are left out.
    """
    c30, c21, c12, c03 = (f.coeff(3, 0), f.coeff(2, 1),
                          f.coeff(1, 2), f.coeff(0, 3))
    if c30 == 0 and c21 == 0 and c12 == 0 and c03 == 0:
        raise NotApplicable("flat umbilic with zero cubic is beyond the table")

    # cubic data of the slope-m germ: substitute y -> y + m x into f3
    a30_poly = (c30, c21, c12, c03)          # f3(1, m), coefficients in m
    a21_poly = (c21, 2 * c12, 3 * c03)
    a12_poly = (c12, 3 * c03)
    from .fields import poly_add, poly_mul, poly_neg, poly_norm, poly_scale
    t_poly = poly_add(poly_scale(poly_mul(poly_norm(a30_poly), poly_norm(a12_poly)), Fraction(3)),
                      poly_neg(poly_mul(poly_norm(a21_poly), poly_norm(a21_poly))))
    candidates: set[Fraction] = set()
    if poly_norm(a30_poly):
        candidates.update(rational_roots(poly_norm(a30_poly)))
    if t_poly:
        candidates.update(rational_roots(t_poly))
    directions = [(Fraction(1), m) for m in sorted(candidates)] + [(Fraction(0), Fraction(1))]

    def line_map(d1, d2):
        def vp_line(t):
            if isinstance(t, RatFunc):
                return Viewpoint((t * d1, t * d2, RatFunc(0)), False)
            return Viewpoint.finite(t * d1, t * d2, 0)
        return vp_line

    out: list[tuple[Viewpoint, EquiType]] = []
    for d1, d2 in directions:
        vp_line = line_map(d1, d2)
        try:
            line_generic, line_specials = _sweep_types(f, vp_line)
        except MongeStrataError:
            continue
        if line_generic.family == "I" and (line_generic.k or 0) <= 2:
            continue  # not exceptional: ordinary lips/beaks line
        special_ts = {s[0] for s in line_specials}
        rep_vp = Viewpoint.infinite(d1, d2, 0)
        rep_type = _type_or_undetermined(f, rep_vp)
        if rep_type.tag != line_generic.tag:
            # the point at infinity is itself special: report it, then pick
            # a finite generic representative for the line
            out.append((rep_vp, rep_type))
            rep_vp = rep_type = None
            for cand in (1, 2, 3, 5, 7):
                if Fraction(cand) not in special_ts:
                    rep_vp = vp_line(Fraction(cand))
                    rep_type = _type_or_undetermined(f, rep_vp)
                    break
        if rep_vp is not None:
            out.append((rep_vp, rep_type))
        for (_t0, vp, et) in line_specials:
            if _t0 != 0:
                out.append((vp, et))
    return out
