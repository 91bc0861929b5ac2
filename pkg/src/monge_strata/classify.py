"""Stratum classification and normal-form reduction of Monge jets.

The classifier first normalizes the 2-jet, then walks the coefficient
condition chains of the appropriate point class:

hyperbolic   contact orders (j, k) of the two asymptotic lines, canonically
             j <= k, read off the pure-power chains c_d0 / c_0d;
parabolic    the lips/beaks chain (P, Q, R from the special-viewpoint germ),
             the cusp-of-Gauss chain (c40, B, A, c50 and the quartic-contact
             recognizer), or the flat-contact chain (S, c40, c50);
flat umbilic the discriminant of the cubic form and its factor structure;
elliptic     a single stratum.

Reduction to the table normal form composes staged group elements: explicit
linear normalizations, diagonal rescalings solved exactly in the rationals,
and a small linear-algebra engine over the six unipotent parameters
(u2, u3, v3, w1, w2, w3) that drives chosen coefficient slots to their
template values while holding every previously established slot fixed,
iterating the exact action until the residuals vanish.  Rescalings that
would need an irrational root report IrrationalNormalization carrying the
defining polynomial; with one_root_extension the reduction retries over a
quadratic or cubic real extension field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (ForbiddenModuli, InsufficientOrder, InternalError,
                     IrrationalNormalization, ModuliMismatch, NotClassified)
from .fields import AlgField, isolate_real_roots, poly_norm, rational_roots
from .germs import PlaneGermJet, _solve_linear, analyze_germ
from .jets import BivariateJet, MongeJet
from .projection import (Viewpoint, central_projection_jet,
                         parabolic_invariants)
from .transform import (ProjTransform, apply_transform, compose,
                        prenormalize_2jet, sqrt_fraction)

_ZERO = Fraction(0)


@dataclass(frozen=True)
class StratumLabel:
    name: str
    codim: int
    jet_order: int
    projection_type: str

    def __repr__(self):
        return f"StratumLabel({self.name}: p={self.jet_order}, s={self.codim}, proj={self.projection_type})"


@dataclass
class NormalFormResult:
    label: StratumLabel
    transform: ProjTransform
    normal: MongeJet          # reduced jet truncated at the class order p
    moduli: dict
    exceptional: bool = False
    full: MongeJet = None     # reduced jet at the input order (extra slots
                              # feed the bifurcation scalars)


@dataclass(frozen=True)
class _Template:
    p: int
    codim: int
    proj: str
    fixed: dict                # slot -> constant coefficient
    sign_slot: Optional[tuple] = None
    moduli: dict = field(default_factory=dict)    # name -> slot
    phis: dict = field(default_factory=dict)      # name -> ordered slot list


def _phi_on(mult: tuple[int, int], deg: int) -> list[tuple[int, int]]:
    """Slots of (x^a y^b) * phi_deg, ordered from the x-power down."""
    a, b = mult
    return [(a + deg - i, b + i) for i in range(deg + 1)]


TEMPLATES: dict[str, _Template] = {
    "Π^p_{I,1}": _Template(4, 1, "I_2 (I_3)",
                           {(0, 2): 1, (3, 0): 1, (1, 3): 1},
                           moduli={"alpha": (4, 0)}),
    "Π^p_{I,2}": _Template(5, 2, "I_2 (I_4)",
                           {(0, 2): 1, (3, 0): 1}, sign_slot=(1, 4),
                           moduli={"alpha": (4, 0), "beta": (0, 5)},
                           phis={"phi3": _phi_on((2, 0), 3)}),
    "Π^p_{c,1}": _Template(4, 2, "III_2 (III_3)",
                           {(0, 2): 1, (2, 1): 1},
                           moduli={"alpha": (4, 0)}),
    "Π^p_{c,2}": _Template(5, 3, "III_2",
                           {(0, 2): 1, (2, 1): 1, (4, 0): Fraction(1, 4)},
                           moduli={"alpha": (5, 0)},
                           phis={"phi4": _phi_on((0, 1), 4)}),
    "Π^p_{c,4}": _Template(5, 3, "IV_1",
                           {(0, 2): 1, (2, 1): 1, (5, 0): 1},
                           phis={"phi4": _phi_on((0, 1), 4)}),
    "Π^p_{I,3}": _Template(6, 3, "I_2 (I_5)",
                           {(0, 2): 1, (3, 0): 1, (1, 5): 1},
                           moduli={"alpha": (4, 0), "beta": (0, 5), "gamma": (0, 6)},
                           phis={"phi3": _phi_on((2, 0), 3), "phi4": _phi_on((2, 0), 4)}),
    "Π^p_{v,1}": _Template(4, 3, "V_1 (VI)",
                           {(0, 2): 1}, sign_slot=(4, 0),
                           moduli={"alpha": (3, 1), "beta": (2, 2)}),
    "Π^p_{c,3}": _Template(5, 4, "III_3 (III_4)",
                           {(0, 2): 1, (2, 1): 1, (4, 0): Fraction(1, 4)},
                           phis={"phi4": _phi_on((0, 1), 4)}),
    "Π^p_{c,5}": _Template(6, 4, "IV_2",
                           {(0, 2): 1, (2, 1): 1}, sign_slot=(6, 0),
                           phis={"phi4": _phi_on((0, 1), 4), "phi5": _phi_on((0, 1), 5)}),
    "Π^p_{I,4}": _Template(6, 4, "I_2 (I_6)",
                           {(0, 2): 1, (3, 0): 1},
                           moduli={"alpha": (4, 0), "beta": (0, 5), "gamma": (0, 6)},
                           phis={"phi3": _phi_on((2, 0), 3), "phi4": _phi_on((2, 0), 4)}),
    "Π^p_{v,2}": _Template(4, 4, "V_1 (VI_1)",
                           {(0, 2): 1}, sign_slot=(4, 0),
                           moduli={"alpha": (3, 1)}),
    "Π^p_{v,3}": _Template(5, 4, "V_2 (VI_2)",
                           {(0, 2): 1, (5, 0): 1},
                           phis={"phi3": _phi_on((0, 1), 3), "phi4": _phi_on((0, 1), 4)}),

    "Π^h_{3,3}": _Template(4, 0, "II_3 / II_3",
                           {(1, 1): 1, (3, 0): 1, (0, 3): 1},
                           moduli={"alpha": (4, 0), "beta": (0, 4)}),
    "Π^h_{3,4}": _Template(4, 1, "II_3 / II_4",
                           {(1, 1): 1, (3, 0): 1, (0, 4): 1},
                           moduli={"alpha": (1, 3)}),
    "Π^h_{3,5}": _Template(5, 2, "II_3 / II_5",
                           {(1, 1): 1, (3, 0): 1, (0, 5): 1},
                           moduli={"alpha": (1, 3)},
                           phis={"phi4": _phi_on((1, 0), 4)}),
    "Π^h_{4,4}": _Template(4, 2, "II_4 / II_4",
                           {(1, 1): 1, (4, 0): 1}, sign_slot=(0, 4),
                           moduli={"alpha": (1, 3), "beta": (3, 1)}),
    "Π^h_{3,6}": _Template(6, 3, "II_3 / II_6",
                           {(1, 1): 1, (3, 0): 1, (0, 6): 1},
                           moduli={"alpha": (1, 3)},
                           phis={"phi4": _phi_on((1, 0), 4), "phi5": _phi_on((1, 0), 5)}),
    "Π^h_{4,5}": _Template(5, 3, "II_4 / II_5",
                           {(1, 1): 1, (4, 0): 1, (0, 5): 1},
                           moduli={"alpha": (1, 3), "beta": (3, 1)},
                           phis={"phi4": _phi_on((1, 0), 4)}),
    "Π^h_{3,7}": _Template(7, 4, "II_3 / II_7",
                           {(1, 1): 1, (3, 0): 1, (0, 7): 1},
                           moduli={"alpha": (1, 3)},
                           phis={"phi4": _phi_on((1, 0), 4), "phi5": _phi_on((1, 0), 5),
                                 "phi6": _phi_on((1, 0), 6)}),
    "Π^h_{4,6}": _Template(6, 4, "II_4 / II_6",
                           {(1, 1): 1, (4, 0): 1}, sign_slot=(0, 6),
                           moduli={"alpha": (1, 3), "beta": (3, 1)},
                           phis={"phi4": _phi_on((1, 0), 4), "phi5": _phi_on((1, 0), 5)}),
    "Π^h_{5,5}": _Template(5, 4, "II_5 / II_5",
                           {(1, 1): 1, (5, 0): 1, (0, 5): 1},
                           moduli={"alpha": (1, 3), "beta": (3, 1)},
                           phis={"phi3": _phi_on((1, 1), 3)}),

    "Π^e": _Template(2, 0, "fold", {(2, 0): 1, (0, 2): 1}),
    "Π^f_1": _Template(4, 3, "I_2^±†",
                       {(1, 2): 1}, sign_slot=(3, 0),
                       moduli={"alpha": (3, 1), "beta": (0, 4), "gamma": (4, 0)}),
    "Π^f_2": _Template(4, 4, "I_2^-†",
                       {(1, 2): 1, (4, 0): 1}, sign_slot=(0, 4),
                       moduli={"alpha": (3, 1)}),
}

BEYOND = StratumLabel("beyond-codim-4", 5, 0, "")


def label_of(name: str) -> StratumLabel:
    t = TEMPLATES[name]
    return StratumLabel(name, t.codim, t.p, t.proj)


def nth_root_fraction(q: Fraction, n: int) -> Fraction | None:
    """Exact real n-th root of q when it is rational, else None."""
    if q == 0:
        return Fraction(0)
    if n % 2 == 0 and q < 0:
        return None
    sign = -1 if q < 0 else 1
    qq = abs(q)

    def iroot(m: int) -> int | None:
        if m == 0:
            return 0
        r = round(m ** (1.0 / n))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** n == m:
                return cand
        return None

    rn, rd = iroot(qq.numerator), iroot(qq.denominator)
    if rn is None or rd is None:
        return None
    return sign * Fraction(rn, rd)


def _root_or_raise(q: Fraction, n: int, what: str) -> Fraction:
    r = nth_root_fraction(q, n)
    if r is None:
        # defining polynomial t^n - q, constant term first
        poly = [-q] + [Fraction(0)] * (n - 1) + [Fraction(1)]
        raise IrrationalNormalization(poly, f"{what} needs a real {n}-th root of {q}")
    return r


_UNIPOTENT = ("u2", "u3", "v3", "w1", "w2", "w3")


def _linear_effects(f: MongeJet) -> dict:
    k = f.order
    fj = f.jet
    fx = fj.derivative("x").extend(k)
    fy = fj.derivative("y").extend(k)
    x = BivariateJet({(1, 0): 1}, k)
    y = BivariateJet({(0, 1): 1}, k)
    euler = fj - x * fx - y * fy
    return {"u2": y * fx, "u3": fj * fx, "v3": fj * fy,
            "w1": x * euler, "w2": y * euler, "w3": fj * euler}


def _make_unipotent(sol: dict) -> ProjTransform:
    return ProjTransform(1, sol.get("u2", 0), sol.get("u3", 0),
                         0, 1, sol.get("v3", 0), 1,
                         sol.get("w1", 0), sol.get("w2", 0), sol.get("w3", 0))


class _Reducer:
    """Accumulates staged transforms with the invariant
    apply(self.t, original, order) == self.f."""

    def __init__(self, f: MongeJet):
        self.f = f
        self.t = ProjTransform.identity()

    def apply(self, t: ProjTransform):
        self.f = apply_transform(t, self.f, self.f.order)
        self.t = compose(self.t, t)

    def stage(self, targets: dict, fuel: int = 25, knobs: tuple = _UNIPOTENT):
        """Drive the listed slots to their target values with unipotent
        elements.  The first-order solve is iterated on the exact action;
        stages whose exact solution is not reached in finitely many steps
        (shear-coupled slots) must use their dedicated closed-form ladders
        instead, so running out of fuel means a missing ladder."""
        for _ in range(fuel):
            resid = {s: targets[s] - self.f.coeff(*s) for s in targets}
            if all(v == 0 for v in resid.values()):
                return
            eff = _linear_effects(self.f)
            rows = list(targets)
            mat = [[eff[p].coeff(*r) for p in knobs] for r in rows]
            rhs = [resid[r] for r in rows]
            sol = _solve_linear(mat, rhs)
            if sol is None:
                raise InternalError(f"reduction stage cannot reach {targets}")
            self.apply(_make_unipotent(dict(zip(knobs, sol))))
        raise InternalError("reduction stage did not converge")

    def kill_single(self, slot: tuple, knob: str, rate_check: bool = True):
        """One-knob exact kill of a slot whose response to the knob is
        linear; verified after the exact application."""
        cur = self.f.coeff(*slot)
        if cur == 0:
            return
        rate = _linear_effects(self.f)[knob].coeff(*slot)
        if rate == 0:
            raise InternalError(f"knob {knob} does not move slot {slot}")
        self.apply(_make_unipotent({knob: -cur / rate}))
        if rate_check and self.f.coeff(*slot) != 0:
            raise InternalError(f"slot {slot} responds nonlinearly to {knob}")

    def kill_pair(self, slot: tuple, knob: str, refit_slot: tuple, refit_knob: str):
        """Kill a slot whose knob also dirties a lower established slot.

        The net rate folds in the response of the refit knob: the main knob
        is applied with the combined rate, then the refit slot is re-killed,
        and the exact outcome is verified.  All four first-order rates must
        be exactly linear for the moves involved, which holds for the staged
        reductions this is used in."""
        cur = self.f.coeff(*slot)
        if cur == 0:
            self.kill_single(refit_slot, refit_knob)
            return
        eff = _linear_effects(self.f)
        rate_main = eff[knob].coeff(*slot)
        dirt = eff[knob].coeff(*refit_slot)
        refit_rate = eff[refit_knob].coeff(*refit_slot)
        response = eff[refit_knob].coeff(*slot)
        net = rate_main - dirt * response / refit_rate
        if net == 0:
            raise InternalError(f"pair {knob}/{refit_knob} cannot move slot {slot}")
        self.apply(_make_unipotent({knob: -cur / net}))
        self.kill_single(refit_slot, refit_knob)
        if self.f.coeff(*slot) != 0:
            raise InternalError(f"pair kill of {slot} via {knob}/{refit_knob} missed")

    def require(self, targets: dict, context: str):
        for s, v in targets.items():
            if self.f.coeff(*s) != v:
                raise InternalError(f"{context}: slot {s} is {self.f.coeff(*s)}, expected {v}")


def _sign_of(v) -> int:
    if isinstance(v, Fraction):
        return 0 if v == 0 else (1 if v > 0 else -1)
    s = getattr(v, "sign", None)
    if callable(s):
        return s()
    raise IrrationalNormalization([], "sign undecidable in this coefficient field")


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def classify(f: MongeJet) -> StratumLabel:
    """Stratum of Tables 1-3 for the jet, or beyond-codim-4."""
    return _classify_core(f)[0]


def _kind_of_2jet(f: MongeJet) -> str:
    c20, c11, c02 = f.coeff(2, 0), f.coeff(1, 1), f.coeff(0, 2)
    if c20 == 0 and c11 == 0 and c02 == 0:
        return "flat-umbilic"
    disc = c11 * c11 - 4 * c20 * c02
    if disc > 0:
        return "hyperbolic"
    if disc < 0:
        return "elliptic"
    return "parabolic"


def _classify_core(f: MongeJet):
    """Returns (label, transform, prenormalized jet, kind)."""
    kind = _kind_of_2jet(f)
    if kind == "elliptic":
        # prenormalization only reads the 2-jet, so zero-extending an
        # order-2 jet to meet its precondition is harmless
        work = f if f.order >= 3 else f.extend(3)
        t, g, _ = prenormalize_2jet(work)
        return label_of("Π^e"), t, g.truncate(f.order), kind
    if f.order < 3:
        raise InsufficientOrder(3)
    t, g, pc = prenormalize_2jet(f)
    if kind == "hyperbolic":
        return _classify_hyperbolic(g, t) + (kind,)
    if kind == "parabolic":
        return _classify_parabolic(g, t) + (kind,)
    return _classify_flat(g, t) + (kind,)


def _contact_order(g: MongeJet, axis: str) -> int | None:
    """Least d >= 3 with the pure x^d (or y^d) coefficient nonzero."""
    for d in range(3, g.order + 1):
        c = g.coeff(d, 0) if axis == "x" else g.coeff(0, d)
        if c != 0:
            return d
    return None


def _classify_hyperbolic(g: MongeJet, t: ProjTransform):
    j = _contact_order(g, "x")
    k = _contact_order(g, "y")
    # undetermined chains: decide or report the order that would decide
    if j is None and k is None:
        if g.order >= 5:
            return BEYOND, t, g  # j + k >= 2(order+1) >= 12 > 10
        raise InsufficientOrder(5)
    if j is None or k is None:
        known = j if j is not None else k
        if known + g.order + 1 >= 11:
            return BEYOND, t, g
        raise InsufficientOrder(11 - known)
    if j > k:
        swap = ProjTransform.linear(0, 1, 1, 0, 1)
        g = apply_transform(swap, g, g.order)
        t = compose(t, swap)
        j, k = k, j
    name = f"Π^h_{{{j},{k}}}"
    if name in TEMPLATES:
        return label_of(name), t, g
    return BEYOND, t, g


def _classify_parabolic(g: MongeJet, t: ProjTransform):
    c30, c21 = g.coeff(3, 0), g.coeff(2, 1)
    if c30 != 0:
        if g.order < 4:
            raise InsufficientOrder(4)
        inv = parabolic_invariants(g)
        if inv.P != 0:
            return label_of("Π^p_{I,1}"), t, g
        if inv.Q is None:
            raise InsufficientOrder(5)
        if inv.Q != 0:
            return label_of("Π^p_{I,2}"), t, g
        if inv.R is None:
            raise InsufficientOrder(6)
        if inv.R != 0:
            return label_of("Π^p_{I,3}"), t, g
        return label_of("Π^p_{I,4}"), t, g
    if c21 != 0:
        if g.order < 4:
            raise InsufficientOrder(4)
        c40 = g.coeff(4, 0)
        inv = parabolic_invariants(g, want_pqr=False)
        if c40 != 0:
            if inv.B != 0:
                return label_of("Π^p_{c,1}"), t, g
            if g.order < 5:
                raise InsufficientOrder(5)
            if inv.A != 0:
                return label_of("Π^p_{c,2}"), t, g
            return label_of("Π^p_{c,3}"), t, g
        if g.order < 5:
            raise InsufficientOrder(5)
        if g.coeff(5, 0) != 0:
            return label_of("Π^p_{c,4}"), t, g
        if g.order < 6:
            raise InsufficientOrder(6)
        # IV_2 needs the sixth-order contact datum of the projection germ
        germ = central_projection_jet(g, Viewpoint.infinite(1, 0, 0), g.order)
        et = analyze_germ(germ).etype
        if et.family == "IV" and et.k == 2:
            return label_of("Π^p_{c,5}"), t, g
        return BEYOND, t, g
    # c30 = c21 = 0: flat-contact chain
    if g.order < 4:
        raise InsufficientOrder(4)
    c40 = g.coeff(4, 0)
    inv = parabolic_invariants(g, want_pqr=False)
    if c40 != 0:
        if inv.S != 0:
            return label_of("Π^p_{v,1}"), t, g
        return label_of("Π^p_{v,2}"), t, g
    if g.order < 5:
        raise InsufficientOrder(5)
    if g.coeff(5, 0) != 0:
        return label_of("Π^p_{v,3}"), t, g
    return BEYOND, t, g


def cubic_discriminant(f: MongeJet):
    c30, c21, c12, c03 = (f.coeff(3, 0), f.coeff(2, 1), f.coeff(1, 2), f.coeff(0, 3))
    return (c12 ** 2 * c21 ** 2 - 4 * c03 * c21 ** 3 - 4 * c12 ** 3 * c30
            + 18 * c03 * c12 * c21 * c30 - 27 * c03 ** 2 * c30 ** 2)


def _synth_div(p: list, m: Fraction):
    """Divide the polynomial (low-first coefficients) by (t - m)."""
    q = [Fraction(0)] * (len(p) - 1)
    acc = Fraction(0)
    for i in range(len(p) - 1, 0, -1):
        acc = acc * m + p[i]
        q[i - 1] = acc
    rem = acc * m + p[0]
    return q, rem


def _cubic_direction_factors(f: MongeJet):
    """Rational root directions of the cubic form with multiplicities.

    The direction (0, 1) accounts for the degree drop of f3(1, m)."""
    c30, c21, c12, c03 = (f.coeff(3, 0), f.coeff(2, 1), f.coeff(1, 2), f.coeff(0, 3))
    poly = list(poly_norm((c30, c21, c12, c03)))  # f3(1, m) as polynomial in m
    roots: list[tuple[tuple[Fraction, Fraction], int]] = []
    if not poly:
        return roots
    for m in rational_roots(tuple(poly)):
        mult = 0
        p = list(poly)
        while len(p) > 1:
            q, rem = _synth_div(p, m)
            if rem != 0:
                break
            p, mult = q, mult + 1
        roots.append(((Fraction(1), m), mult))
    deg_drop = 3 - (len(poly) - 1)
    if deg_drop > 0:
        roots.append(((Fraction(0), Fraction(1)), deg_drop))
    return roots


def _classify_flat(g: MongeJet, t: ProjTransform):
    if g.order < 3:
        raise InsufficientOrder(3)
    disc = cubic_discriminant(g)
    if disc != 0:
        return label_of("Π^f_1"), t, g
    cubic = [g.coeff(3, 0), g.coeff(2, 1), g.coeff(1, 2), g.coeff(0, 3)]
    if all(c == 0 for c in cubic):
        return BEYOND, t, g
    # repeated-root cubic: the class f_2 needs a genuine double line (not a
    # triple one) with nondegenerate quartic contact in adapted coordinates
    factors = _cubic_direction_factors(g)
    double = [d for d, m in factors if m == 2]
    if not double or any(m >= 3 for _d, m in factors):
        return BEYOND, t, g
    if g.order < 4:
        raise InsufficientOrder(4)
    simple = [d for d, m in factors if m == 1]
    if not simple:
        return BEYOND, t, g
    gg, lt = _flat_align(g, double[0], simple[0])
    if gg.coeff(4, 0) != 0 and gg.coeff(0, 4) != 0:
        return label_of("Π^f_2"), compose(t, lt), gg
    return BEYOND, t, g


# ---------------------------------------------------------------------------
# reduction to the table normal forms
# ---------------------------------------------------------------------------

def reduce_to_normal_form(f: MongeJet, one_root_extension: bool = False) -> NormalFormResult:
    """Reduce the jet to its class template, returning the accumulated
    transform, the reduced jet at the class order, and the moduli.

    Rescalings and shears that would need an irrational real root raise
    IrrationalNormalization with the defining polynomial; when
    one_root_extension is set and the polynomial has degree two or three,
    the reduction retries once over the corresponding real extension field.
    """
    try:
        return _reduce(f)
    except IrrationalNormalization as exc:
        if not one_root_extension:
            raise
        poly = poly_norm(exc.defining)
        if not poly or len(poly) - 1 not in (2, 3):
            raise
        field_ = _field_for_real_root(poly)
        g = MongeJet(f.jet.map_coeffs(field_.num))
        return _reduce(g)


def _field_for_real_root(poly) -> AlgField:
    intervals = isolate_real_roots(poly)
    if not intervals:
        raise IrrationalNormalization(list(poly), "defining polynomial has no real root")
    lo, hi = intervals[-1]  # deterministic choice: the largest real root
    return AlgField(poly, lo, hi)


def _reduce(f: MongeJet) -> NormalFormResult:
    label, t, g, kind = _classify_core(f)
    if label.name == "beyond-codim-4":
        raise NotClassified("jet lies beyond the codimension-4 strata")
    if f.order < label.jet_order:
        raise InsufficientOrder(label.jet_order)
    red = _Reducer(g)
    red.t = t
    exceptional = False
    name = label.name
    if name == "Π^e":
        tpl = TEMPLATES[name]
        if red.f.coeff(2, 0) != 1 or red.f.coeff(0, 2) != 1:
            lam = red.f.coeff(0, 2) / red.f.coeff(2, 0)
            raise IrrationalNormalization(
                [-lam, Fraction(0), Fraction(1)],
                "elliptic 2-jet is x^2 + lam y^2 with lam not a rational square")
    elif kind == "parabolic":
        exceptional = _reduce_parabolic(red, name)
    elif kind == "hyperbolic":
        _reduce_hyperbolic(red, name)
    else:
        _reduce_flat(red, name)
    tpl = TEMPLATES[name]
    normal = red.f.truncate(tpl.p)
    moduli = _read_moduli(normal, tpl, exceptional)
    _assert_template_shape(normal, tpl, moduli, exceptional)
    return NormalFormResult(label, red.t, normal, moduli, exceptional, full=red.f)


def _read_moduli(normal: MongeJet, tpl: _Template, exceptional: bool) -> dict:
    moduli: dict = {}
    for mname, slot in tpl.moduli.items():
        moduli[mname] = normal.coeff(*slot)
    if tpl.sign_slot is not None:
        moduli["sign"] = _sign_of(normal.coeff(*tpl.sign_slot))
    for pname, slots in tpl.phis.items():
        moduli[pname] = [normal.coeff(*s) for s in slots]
    if exceptional:
        moduli["beta"] = normal.coeff(3, 1)
    return moduli


def _assert_template_shape(normal: MongeJet, tpl: _Template, moduli: dict, exceptional: bool):
    free = set(tpl.moduli.values()) | {s for slots in tpl.phis.values() for s in slots}
    if tpl.sign_slot is not None:
        free.add(tpl.sign_slot)
    if exceptional:
        free.add((3, 1))
    derived = _derived_slots(tpl, moduli)
    for d in range(2, tpl.p + 1):
        for i in range(d + 1):
            slot = (i, d - i)
            if slot in free:
                continue
            want = tpl.fixed.get(slot, derived.get(slot, Fraction(0)))
            got = normal.coeff(*slot)
            if got != want:
                raise InternalError(f"reduced jet misses template: slot {slot} is {got}, want {want}")
    if tpl.sign_slot is not None:
        v = normal.coeff(*tpl.sign_slot)
        if v != moduli["sign"]:
            raise InternalError(f"sign slot {tpl.sign_slot} is {v}, not normalized to +-1")


def _derived_slots(tpl: _Template, moduli: dict) -> dict:
    """Template slots pinned by other moduli (the flat-contact coincidence)."""
    if tpl is TEMPLATES["Π^p_{v,2}"]:
        a = moduli.get("alpha", _ZERO)
        return {(2, 2): moduli.get("sign", 1) * Fraction(3, 8) * a * a}
    return {}


def _parabolic_targets(upto: dict | None = None) -> dict:
    base = {(2, 0): Fraction(0), (1, 1): Fraction(0), (0, 2): Fraction(1)}
    if upto:
        base.update(upto)
    return base


def _kill_x3y_cusp(red: _Reducer):
    """Exact removal of the x^3 y slot of a jet established as
    y^2 + x^2 y + c40 x^4 (c40 != 1), by the shear x -> x + a y followed by
    its unipotent compensations.  The shear amount solves the exactly linear
    net response 4 a (c40 - 1) once the w1 refit of the x y^2 slot is folded
    in; every subsequent move is exactly linear on its own slot.  A Newton
    iteration cannot reach this combination exactly, hence the ladder."""
    c31 = red.f.coeff(3, 1)
    if c31 == 0:
        return
    c40 = red.f.coeff(4, 0)
    a = c31 / (4 * (1 - c40))
    red.apply(ProjTransform.linear(1, a, 0, 1, 1))
    red.kill_single((1, 2), "w1")
    red.kill_single((0, 3), "w2")
    if red.f.coeff(3, 1) != 0:
        raise InternalError("x^3 y ladder: shear bookkeeping failed")
    red.kill_pair((2, 2), "v3", (0, 3), "w2")
    red.kill_single((1, 3), "u3")
    red.kill_single((0, 4), "w3")


def _reduce_parabolic(red: _Reducer, name: str) -> bool:
    exceptional = False
    if name.startswith("Π^p_{I"):
        red.kill_single((2, 1), "u2")
        red.kill_single((1, 2), "w1")
        red.kill_single((0, 3), "w2")
        c30 = red.f.coeff(3, 0)
        red.apply(ProjTransform.diagonal(c30, c30 ** 2, c30 ** 4))
        t3 = _parabolic_targets({(2, 1): _ZERO, (1, 2): _ZERO, (0, 3): _ZERO, (3, 0): Fraction(1)})
        red.require(t3, "parabolic I chain cubic")
        if red.f.order >= 4:
            red.kill_single((2, 2), "u3")
            red.kill_pair((3, 1), "v3", (0, 3), "w2")
            red.kill_single((0, 4), "w3")
            red.require({**t3, **{(2, 2): _ZERO, (3, 1): _ZERO, (0, 4): _ZERO}},
                        "parabolic I chain quartic")
        if name == "Π^p_{I,1}":
            c13 = red.f.coeff(1, 3)
            s = _root_or_raise(1 / c13, 5, "normalizing the x y^3 slot")
            red.apply(ProjTransform.diagonal(s ** 2, s ** 3, s ** 6))
        elif name == "Π^p_{I,2}":
            c14 = red.f.coeff(1, 4)
            s = _root_or_raise(1 / abs(c14), 8, "normalizing the x y^4 slot")
            red.apply(ProjTransform.diagonal(s ** 2, s ** 3, s ** 6))
        elif name == "Π^p_{I,3}":
            c15 = red.f.coeff(1, 5)
            s = _root_or_raise(1 / c15, 11, "normalizing the x y^5 slot")
            red.apply(ProjTransform.diagonal(s ** 2, s ** 3, s ** 6))
        return False
    if name.startswith("Π^p_{c"):
        red.kill_single((1, 2), "u2")
        red.kill_single((0, 3), "w2")
        c21 = red.f.coeff(2, 1)
        red.apply(ProjTransform.diagonal(1, c21, c21 ** 2))
        t3 = _parabolic_targets({(1, 2): _ZERO, (0, 3): _ZERO, (2, 1): Fraction(1), (3, 0): _ZERO})
        red.require(t3, "cusp chain cubic")
        red.kill_single((1, 3), "u3")
        red.kill_pair((2, 2), "v3", (0, 3), "w2")
        red.kill_single((0, 4), "w3")
        t4 = {**t3, **{(1, 3): _ZERO, (2, 2): _ZERO, (0, 4): _ZERO}}
        red.require(t4, "cusp chain quartic")
        c40 = red.f.coeff(4, 0)
        if c40 == 1:
            exceptional = True  # x^3 y cannot be removed; keep it as a modulus
        else:
            _kill_x3y_cusp(red)
            red.require(t4, "cusp chain after x^3 y removal")
        if name == "Π^p_{c,4}":
            c50 = red.f.coeff(5, 0)
            red.apply(ProjTransform.diagonal(1 / c50, 1 / c50 ** 2, 1 / c50 ** 4))
        elif name == "Π^p_{c,5}":
            c60 = red.f.coeff(6, 0)
            s = _root_or_raise(1 / abs(c60), 2, "normalizing the x^6 slot")
            red.apply(ProjTransform.diagonal(s, s ** 2, s ** 4))
        return exceptional
    # flat-contact chain
    red.kill_single((1, 2), "w1")
    red.kill_single((0, 3), "w2")
    t3 = _parabolic_targets({(1, 2): _ZERO, (0, 3): _ZERO, (3, 0): _ZERO, (2, 1): _ZERO})
    red.require(t3, "flat-contact cubic")
    if name in ("Π^p_{v,1}", "Π^p_{v,2}"):
        c40 = red.f.coeff(4, 0)
        sgn = _sign_of(c40)
        rho = _root_or_raise(abs(c40), 2, "normalizing the x^4 slot")
        red.apply(ProjTransform.diagonal(1, rho, rho ** 2))
        # remove the x y^3 slot by the shear whose amount solves the cubic
        c13, c22, c31 = red.f.coeff(1, 3), red.f.coeff(2, 2), red.f.coeff(3, 1)
        shear_poly = poly_norm((c13, 2 * c22, 3 * c31, 4 * sgn))
        roots = rational_roots(shear_poly)
        if not roots:
            raise IrrationalNormalization(
                list(shear_poly), "the x y^3 shear cubic has no rational root")
        u = roots[0]
        red.apply(ProjTransform.linear(1, u, 0, 1, 1))
        red.kill_single((0, 4), "w3")
        red.require({**t3, **{(1, 3): _ZERO, (0, 4): _ZERO, (4, 0): Fraction(sgn)}},
                    "flat-contact quartic")
    else:  # Π^p_{v,3}
        c50 = red.f.coeff(5, 0)
        red.apply(ProjTransform.diagonal(c50, c50 ** 3, c50 ** 6))
    return False


def _reduce_hyperbolic(red: _Reducer, name: str):
    j, k = (int(name[5]), int(name[7]))
    base = {(2, 0): _ZERO, (1, 1): Fraction(1), (0, 2): _ZERO}
    kill3 = {(2, 1): _ZERO, (1, 2): _ZERO}
    red.kill_single((2, 1), "v3")
    red.kill_single((1, 2), "u3")
    red.require({**base, **kill3}, "hyperbolic cubic slots")
    # scales pinning the two contact slots
    cj = red.f.coeff(j, 0)
    ck = red.f.coeff(0, k)
    if (j, k) == (3, 3):
        s = _root_or_raise(1 / (cj ** 2 * ck), 3, "hyperbolic (3,3) rescale")
        r = s ** 2 * cj
        red.apply(ProjTransform.linear(s, 0, 0, r, s * r))
    elif j == 3:
        e = 2 * k - 3
        u1 = _root_or_raise(1 / (cj ** (k - 1) * ck), e, f"hyperbolic (3,{k}) rescale")
        v2 = u1 ** 2 * cj
        red.apply(ProjTransform.linear(u1, 0, 0, v2, u1 * v2))
    elif (j, k) == (4, 4):
        q = cj ** 3 * ck
        sgn = _sign_of(q)
        u1 = _root_or_raise(1 / abs(q), 8, "hyperbolic (4,4) rescale")
        v2 = u1 ** 3 * cj
        red.apply(ProjTransform.linear(u1, 0, 0, v2, u1 * v2))
    elif (j, k) == (4, 5):
        u1 = _root_or_raise(1 / (cj ** 4 * ck), 11, "hyperbolic (4,5) rescale")
        v2 = u1 ** 3 * cj
        red.apply(ProjTransform.linear(u1, 0, 0, v2, u1 * v2))
    elif (j, k) == (4, 6):
        q = cj ** 5 * ck
        sgn = _sign_of(q)
        u1 = _root_or_raise(1 / abs(q), 14, "hyperbolic (4,6) rescale")
        v2 = u1 ** 3 * cj
        red.apply(ProjTransform.linear(u1, 0, 0, v2, u1 * v2))
    else:  # (5, 5)
        u1 = _root_or_raise(1 / (cj ** 4 * ck), 15, "hyperbolic (5,5) rescale")
        v2 = u1 ** 4 * cj
        red.apply(ProjTransform.linear(u1, 0, 0, v2, u1 * v2))
    # fourth-order kills per template
    t3 = {**base, **kill3}
    if j == 3:
        t3[(3, 0)] = Fraction(1)
    if k == 3:
        t3[(0, 3)] = Fraction(1)
    kills4 = {(2, 2): _ZERO}
    if (j, k) == (3, 3):
        red.kill_pair((3, 1), "u3", (1, 2), "w2")
        red.kill_pair((1, 3), "v3", (2, 1), "w1")
        kills4.update({(3, 1): _ZERO, (1, 3): _ZERO})
    elif j == 3:
        red.kill_pair((4, 0), "w1", (2, 1), "v3")
        red.kill_pair((3, 1), "u3", (1, 2), "w2")
        kills4.update({(4, 0): _ZERO, (3, 1): _ZERO})
    red.kill_single((2, 2), "w3")
    red.require({**t3, **kills4}, "hyperbolic quartic slots")


def _reduce_flat(red: _Reducer, name: str):
    g = red.f
    base = {(2, 0): _ZERO, (1, 1): _ZERO, (0, 2): _ZERO}
    if name == "Π^f_1":
        disc = cubic_discriminant(g)
        factors = _cubic_direction_factors(g)
        dirs = [d for d, _m in factors]
        if disc > 0:
            if len(dirs) < 3:
                raise IrrationalNormalization(
                    [g.coeff(3, 0), g.coeff(2, 1), g.coeff(1, 2), g.coeff(0, 3)],
                    "three real cubic lines are not all rational")
            # send the roots to the zero lines of x(y-x)(y+x) = x y^2 - x^3
            lt = _three_line_map(dirs[0], dirs[1], dirs[2])
            red.apply(lt)
        else:
            if not dirs:
                raise IrrationalNormalization(
                    [g.coeff(3, 0), g.coeff(2, 1), g.coeff(1, 2), g.coeff(0, 3)],
                    "the real cubic line is not rational")
            red.apply(_one_line_map(red.f, dirs[0]))
        c12 = red.f.coeff(1, 2)
        red.apply(ProjTransform.diagonal(1, 1, c12))
        sgn = _sign_of(red.f.coeff(3, 0))
        t3 = {**base, **{(1, 2): Fraction(1), (3, 0): Fraction(sgn),
                         (2, 1): _ZERO, (0, 3): _ZERO}}
        red.require(t3, "flat umbilic cubic")
        red.kill_single((2, 2), "w1")
        red.kill_single((1, 3), "w2")
        red.require({**t3, **{(2, 2): _ZERO, (1, 3): _ZERO}}, "flat umbilic quartic")
        return
    # Π^f_2: the classifier already aligned the cubic to x y^2
    t3 = {**base, **{(1, 2): Fraction(1), (3, 0): _ZERO, (2, 1): _ZERO, (0, 3): _ZERO}}
    red.require(t3, "flat umbilic double-line cubic")
    c40, c04 = red.f.coeff(4, 0), red.f.coeff(0, 4)
    sgn = _sign_of(c40 * c04)
    u1 = _root_or_raise(1 / abs(c40 * c04), 2, "flat umbilic x^4/y^4 rescale")
    if _sign_of(c40) < 0:
        u1 = -u1  # pick the branch with u1^3 c40 > 0 so the y-rescale is real
    v2sq = u1 ** 3 * c40
    v2 = sqrt_fraction(v2sq) if isinstance(v2sq, Fraction) else None
    if v2 is None:
        raise IrrationalNormalization([-v2sq, Fraction(0), Fraction(1)],
                                      "flat umbilic y-rescale needs a square root")
    red.apply(ProjTransform.linear(u1, 0, 0, v2, u1 * v2 * v2))
    red.kill_single((2, 2), "w1")
    red.kill_single((1, 3), "w2")
    red.require({**t3, **{(2, 2): _ZERO, (1, 3): _ZERO,
                          (4, 0): Fraction(1), (0, 4): Fraction(sgn)}},
                "flat umbilic quartic")


def _three_line_map(d1, d2, d3) -> ProjTransform:
    """Linear pullback sending the zero lines of x y^2 - x^3 = x(y-x)(y+x),
    i.e. the directions (0,1), (1,1), (1,-1), to d1, d2, d3."""
    # solve d1 = a * M d2' ... : standard three-point construction on P^1
    (a1, b1), (a2, b2), (a3, b3) = d1, d2, d3
    det = a2 * b3 - a3 * b2
    # coordinates of d1 in the basis (d2, d3)
    lam = (a1 * b3 - a3 * b1) / det
    mu = (a2 * b1 - a1 * b2) / det
    q2, q3 = (Fraction(1), Fraction(1)), (Fraction(1), Fraction(-1))
    # coordinates of (0, 1) in the basis (q2, q3)
    lam_t, mu_t = Fraction(1, 2), Fraction(-1, 2)
    # M = [d2*c2 | d3*c3] . inv([q2 | q3]) sends q2, q3, (0,1) to d2, d3, d1
    c2, c3 = lam / lam_t, mu / mu_t
    p11, p12 = c2 * a2, c3 * a3
    p21, p22 = c2 * b2, c3 * b3
    qdet = q2[0] * q3[1] - q3[0] * q2[1]  # = -2
    i11, i12 = q3[1] / qdet, -q3[0] / qdet
    i21, i22 = -q2[1] / qdet, q2[0] / qdet
    u1 = p11 * i11 + p12 * i21
    u2 = p11 * i12 + p12 * i22
    v1 = p21 * i11 + p22 * i21
    v2 = p21 * i12 + p22 * i22
    return ProjTransform.linear(u1, u2, v1, v2, 1)


def _one_line_map(g: MongeJet, d) -> ProjTransform:
    """Pullback making the cubic x * (definite quadratic in x, y) with the
    single real line at the x factor, then y-shear and rescale to x y^2 + x^3
    shape; raises when the definite part needs an irrational rescale."""
    a, b = d
    # send (0, 1) to the root direction d: columns (complement, d)
    if a != 0:
        comp = (Fraction(0), Fraction(1)) if b == 0 or a != 0 else (Fraction(1), Fraction(0))
    else:
        comp = (Fraction(1), Fraction(0))
    if a * comp[1] - b * comp[0] == 0:
        comp = (Fraction(1), Fraction(0))
    lt = ProjTransform.linear(comp[0], a, comp[1], b, 1)
    gg = apply_transform(lt, g, g.order)
    # cubic is now x * q(x, y) with q definite: q = A x^2 + B x y + C y^2
    A, B, C = gg.coeff(3, 0), gg.coeff(2, 1), gg.coeff(1, 2)
    # shear y -> y - B/(2C) x to remove the cross term
    sh = ProjTransform.linear(1, 0, -B / (2 * C), 1, 1)
    gg = apply_transform(sh, gg, gg.order)
    lt = compose(lt, sh)
    A2, C2 = gg.coeff(3, 0), gg.coeff(1, 2)
    ratio = A2 / C2
    root = sqrt_fraction(ratio) if isinstance(ratio, Fraction) and ratio > 0 else None
    if root is None:
        raise IrrationalNormalization([-ratio, Fraction(0), Fraction(1)],
                                      "definite cubic factor needs a square-root rescale")
    sc = ProjTransform.linear(1, 0, 0, root, 1)
    return compose(lt, sc)


# ---------------------------------------------------------------------------
# templates
# ---------------------------------------------------------------------------

def normal_form_template(name: str, moduli: dict | None = None) -> MongeJet:
    """The exact table polynomial of the named stratum as a MongeJet.

    Moduli names follow the table: alpha, beta, gamma, sign (+1 or -1), and
    phi3..phi6 as coefficient lists ordered from the highest x power.
    """
    if name not in TEMPLATES:
        raise ModuliMismatch(f"unknown stratum {name!r}")
    tpl = TEMPLATES[name]
    moduli = dict(moduli or {})
    coeffs = dict(tpl.fixed)
    sign = 1
    if tpl.sign_slot is not None:
        sign = int(moduli.pop("sign", 1))
        if sign not in (1, -1):
            raise ModuliMismatch("sign must be +1 or -1")
        coeffs[tpl.sign_slot] = Fraction(sign)
    for mname, slot in tpl.moduli.items():
        if mname in moduli:
            coeffs[slot] = Fraction(moduli.pop(mname))
    for pname, slots in tpl.phis.items():
        values = moduli.pop(pname, None)
        if values is None:
            continue
        if len(values) != len(slots):
            raise ModuliMismatch(f"{pname} needs {len(slots)} coefficients")
        for slot, v in zip(slots, values):
            v = Fraction(v)
            if v != 0:
                coeffs[slot] = v
    beta_exc = moduli.pop("beta", None) if name == "Π^p_{c,1}" else None
    if moduli:
        raise ModuliMismatch(f"unexpected moduli for {name}: {sorted(moduli)}")
    _check_open_conditions(name, coeffs, sign)
    if name == "Π^p_{v,2}":
        a = coeffs.get((3, 1), _ZERO)
        coeffs[(2, 2)] = sign * Fraction(3, 8) * a * a
    if beta_exc is not None:
        if coeffs.get((4, 0)) != 1:
            raise ModuliMismatch("the x^3 y modulus of Π^p_{c,1} exists only for alpha = 1")
        coeffs[(3, 1)] = Fraction(beta_exc)
    coeffs = {s: c for s, c in coeffs.items() if c != 0}
    return MongeJet.from_terms(coeffs, tpl.p)


def _check_open_conditions(name: str, coeffs: dict, sign: int):
    a = coeffs.get((4, 0), _ZERO) if name == "Π^p_{c,1}" else None
    if name == "Π^p_{c,1}":
        if a in (0, Fraction(1, 4)):
            raise ForbiddenModuli("Π^p_{c,1} needs alpha not in {0, 1/4}")
    if name == "Π^p_{c,2}" and coeffs.get((5, 0), _ZERO) == 0:
        raise ForbiddenModuli("Π^p_{c,2} needs alpha != 0")
    if name == "Π^p_{v,1}":
        al = coeffs.get((3, 1), _ZERO)
        be = coeffs.get((2, 2), _ZERO)
        if be == sign * Fraction(3, 8) * al * al:
            raise ForbiddenModuli("Π^p_{v,1} needs beta != ±(3/8) alpha^2")


def _flat_align(g: MongeJet, double_dir, simple_dir):
    """Linear change after which the cubic is exactly x y^2: the pullback
    substitutes (x, y) -> x * double + y * simple, so the double direction
    carries the y^2 factor and the simple one the x factor."""
    (p1, p2), (q1, q2) = double_dir, simple_dir
    if p1 * q2 - p2 * q1 == 0:
        raise InternalError("cubic root directions are not independent")
    lt = ProjTransform.linear(p1, q1, p2, q2, 1)
    gg = apply_transform(lt, g, g.order)
    c12 = gg.coeff(1, 2)
    if c12 == 0:
        raise InternalError("flat alignment failed to produce x y^2")
    lt2 = ProjTransform.diagonal(1, 1, c12)
    return apply_transform(lt2, gg, gg.order), compose(lt, lt2)
