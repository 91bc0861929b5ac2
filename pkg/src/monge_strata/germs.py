"""Plane-to-plane germ normalization and equisingularity recognition.

A germ (R^2, 0) -> (R^2, 0) of corank at most one is brought to the shape
(y, h(x, y)) by a change of coordinates, after which its topological class
is read off the Newton data of h.  The recognized classes and their
determining jets are

    regular                  (y, x)
    fold                     (y, x^2)
    I_k   (k >= 2, sign)     (y, x^3 +- x y^k)          p = k+1
    II_k  (k >= 3)           (y, x y + x^k)             p = k
    III_k (k >= 2)           (y, x^2 y + x^4 + x^(2k+1))p = 2k+1
    IV_1, IV_2               (y, x^2 y + x^5 / x^6)
    V_1                      (y, x y^2 + x^4)
    V_2                      (y, x y^2 + d x^3 y)
    VI, VI_1, VI_2           quartic classes (y, x^4 + c x^2 y^2 + d x y^3), ...

Everything is exact.  Normalization moves are elementary source or target
changes applied in a staged worklist; each move is recorded so the composed
changes can be replayed against the input germ, which is how the test suite
certifies soundness.  Slots that no admissible move can reach are the
recognition data; the last open condition that fired is kept as the
``decisive`` value, which parameter sweeps use to locate special viewpoints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import CorankTwo, InternalError, OrderTooLow
from .jets import BivariateJet, TrivariateJet, compose_trunc, solve_curve, solve_implicit

_ZERO = Fraction(0)


@dataclass(frozen=True)
class PlaneGermJet:
    """Jet of a map germ (R^2, 0) -> (R^2, 0): a pair of bivariate jets."""

    first: BivariateJet
    second: BivariateJet

    def __post_init__(self):
        if self.first.order != self.second.order:
            raise ValueError("components must share a truncation order")
        for comp in (self.first, self.second):
            if (0, 0) in comp.coeffs:
                raise ValueError("germ components must vanish at the origin")

    @property
    def order(self) -> int:
        return self.first.order

    @staticmethod
    def from_terms(first: dict, second: dict, order: int) -> "PlaneGermJet":
        return PlaneGermJet(BivariateJet(first, order), BivariateJet(second, order))

    def linear_matrix(self):
        return ((self.first.coeff(1, 0), self.first.coeff(0, 1)),
                (self.second.coeff(1, 0), self.second.coeff(0, 1)))

    def __repr__(self):
        return f"PlaneGermJet({self.first!r}, {self.second!r})"


def compose_germ(outer: PlaneGermJet, inner: PlaneGermJet, k: int | None = None) -> PlaneGermJet:
    """outer after inner, truncated at k (default: the shared order)."""
    if k is None:
        k = min(outer.order, inner.order)
    return PlaneGermJet(
        compose_trunc(outer.first, inner.first, inner.second, k),
        compose_trunc(outer.second, inner.first, inner.second, k))


def identity_germ(k: int) -> PlaneGermJet:
    return PlaneGermJet.from_terms({(1, 0): 1}, {(0, 1): 1}, k)


def invert_germ(g: PlaneGermJet, k: int | None = None) -> PlaneGermJet:
    """Series inverse of a germ with invertible linear part."""
    if k is None:
        k = g.order
    (a, b), (c, d) = g.linear_matrix()
    det = a * d - b * c
    if det == 0:
        raise CorankTwo("germ has no series inverse")
    ia, ib, ic, id_ = d / det, -b / det, -c / det, a / det
    h = PlaneGermJet.from_terms({(1, 0): ia, (0, 1): ib}, {(1, 0): ic, (0, 1): id_}, k)
    ident = identity_germ(k)
    for _ in range(k + 1):
        e = compose_germ(g, h, k)
        e1, e2 = e.first - ident.first, e.second - ident.second
        if e1.is_zero() and e2.is_zero():
            return h
        h = PlaneGermJet(h.first - (ia * e1 + ib * e2), h.second - (ic * e1 + id_ * e2))
    raise InternalError("germ inversion did not converge")


@dataclass(frozen=True)
class EquiType:
    """Recognized equisingularity class with its table data.

    ``family`` is one of regular, fold, I, II, III, IV, V, VI, VI_1, VI_2,
    degenerate-beyond-table.  ``k`` is the chain index where it applies,
    ``sign`` the +-1 of the determining jet when it is an invariant over the
    ordered field (None for parameterized coefficients or odd k), ``p`` the
    determining jet order and ``codim`` the table codimension.  ``params``
    holds the residual moduli read from the normal form.
    """

    family: str
    k: Optional[int] = None
    sign: Optional[int] = None
    p: Optional[int] = None
    codim: Optional[int] = None
    params: dict = field(default_factory=dict, compare=False)

    @property
    def tag(self) -> str:
        if self.family in ("regular", "fold", "degenerate-beyond-table",
                           "VI", "VI_1", "VI_2", "undetermined"):
            return self.family
        base = f"{self.family}_{self.k}"
        if self.family == "I" and self.sign is not None:
            base += "^+" if self.sign > 0 else "^-"
        return base

    def __repr__(self):
        return f"EquiType({self.tag})"


def _sign_or_none(v):
    if isinstance(v, Fraction):
        return 0 if v == 0 else (1 if v > 0 else -1)
    sign = getattr(v, "sign", None)
    if callable(sign):
        return sign()
    return None


class _Normalizer:
    """Workhorse: holds the (y, h) form, applies recorded elementary moves.

    left/right accumulate the target and source changes as germ jets, so
    left o original o right equals the current germ.
    """

    def __init__(self, germ: PlaneGermJet):
        self.k = germ.order
        self.left = identity_germ(self.k)
        self.right = identity_germ(self.k)
        self.pair = germ

    # -- generic application -------------------------------------------------
    def _apply(self, tgt: PlaneGermJet | None, src: PlaneGermJet | None):
        g = self.pair
        if src is not None:
            g = compose_germ(g, src, self.k)
            self.right = compose_germ(self.right, src, self.k)
        if tgt is not None:
            g = compose_germ(tgt, g, self.k)
            self.left = compose_germ(tgt, self.left, self.k)
        self.pair = g

    # -- elementary moves on the (y, h) shape --------------------------------
    @property
    def h(self) -> BivariateJet:
        return self.pair.second

    def a(self, i: int, j: int):
        return self.pair.second.coeff(i, j)

    def tgt_swap(self):
        self._apply(PlaneGermJet.from_terms({(0, 1): 1}, {(1, 0): 1}, self.k), None)

    def kill_pure_y(self):
        # target (X, Y) -> (X, Y - r(X)) with r(t) = h(0, t)
        r = {(j, 0): -c for (i, j), c in self.pair.second.coeffs.items() if i == 0}
        if not r:
            return
        r[(0, 1)] = r.get((0, 1), 0) + 1
        tgt = PlaneGermJet.from_terms({(1, 0): 1}, r, self.k)
        self._apply(tgt, None)

    def src_x(self, m: tuple[int, int], c):
        """Source change x -> x + c x^m0 y^m1 (first component stays y)."""
        if c == 0:
            return
        src = PlaneGermJet.from_terms({(1, 0): 1, m: c}, {(0, 1): 1}, self.k)
        self._apply(None, src)

    def src_scale(self, lam, mu):
        src = PlaneGermJet.from_terms({(1, 0): lam}, {(0, 1): mu}, self.k)
        tgt = PlaneGermJet.from_terms({(1, 0): 1 / mu}, {(0, 1): 1}, self.k)
        self._apply(tgt, src)

    def tgt_scale(self, c):
        if c == 1:
            return
        tgt = PlaneGermJet.from_terms({(1, 0): 1}, {(0, 1): c}, self.k)
        self._apply(tgt, None)

    def tgt_func(self, m: int, n: int, s):
        """Target Y -> Y + s X^m Y^n (n >= 1, m + n >= 2)."""
        if s == 0:
            return
        tgt = PlaneGermJet.from_terms({(1, 0): 1}, {(0, 1): 1, (m, n): s}, self.k)
        self._apply(tgt, None)

    # -- linearized effects, used by the composite solver --------------------
    def effect_src_x(self, m: tuple[int, int]) -> dict:
        # extending the derivative back to order k is sound here: the
        # spurious top coefficients only influence degrees above k
        hx = self.pair.second.derivative("x").extend(self.k)
        mono = BivariateJet({m: 1}, self.k)
        return (mono * hx).coeffs

    def effect_tgt_func(self, m: int, n: int) -> dict:
        h = self.pair.second
        out = BivariateJet({(0, m): 1}, self.k)
        for _ in range(n):
            out = out * h
        return out.coeffs


def to_y_h(germ: PlaneGermJet) -> _Normalizer:
    """Stage one: bring a corank <= 1 germ to (y, h) with h(0, y) = 0."""
    nz = _Normalizer(germ)
    (a, b), (c, d) = nz.pair.linear_matrix()
    if a == 0 and b == 0:
        if c == 0 and d == 0:
            raise CorankTwo("germ has zero linear part")
        nz.tgt_swap()
    (a, b), _ = nz.pair.linear_matrix()
    if b == 0:
        # need d(first)/dy != 0: swap source variables
        nz._apply(None, PlaneGermJet.from_terms({(0, 1): 1}, {(1, 0): 1}, nz.k))
    # straighten: find the source change making the first component exactly y
    p1 = nz.pair.first
    F = TrivariateJet({(0, 1, 0): -1, **{(i, 0, j): cc for (i, j), cc in p1.coeffs.items()}}, nz.k)
    y_of = solve_implicit(F, nz.k)  # old y as a series in (x, new y)
    src = PlaneGermJet(BivariateJet({(1, 0): 1}, nz.k), y_of)
    nz._apply(None, src)
    if nz.pair.first != BivariateJet({(0, 1): 1}, nz.k):
        raise InternalError("straightening failed to produce (y, h)")
    nz.kill_pure_y()
    return nz


def _x2y_keep(i: int, j: int, iii_side: bool) -> bool:
    """Slots of the x^2 y branch that no admissible change can remove."""
    if j != 0:
        return (i, j) == (2, 1)
    if not iii_side:
        return True          # IV side: every pure-x coefficient is data
    return i in (4, 5) or i % 2 == 1   # III side: odd powers are the chain


def _sweep_x2y(nz: _Normalizer, iii_side: bool) -> bool:
    """One normalization pass over degrees 4..order in the x^2 y branch.

    At each degree the removable slots are killed by an exact linear solve
    over a generator catalog, constrained to leave every lower degree (and
    the kept data slots) untouched to first order.  Second-order spill lands
    strictly higher or in benign mixed slots; callers iterate to stability.
    Returns True if any change was applied.
    """
    fired = False
    k = nz.k
    for d in range(4, k + 1):
        nz.kill_pure_y()
        targets = [(i, j) for (i, j), c in nz.pair.second.coeffs.items()
                   if i + j == d and i > 0 and not _x2y_keep(i, j, iii_side)]
        if not targets:
            continue
        gens = []
        for p in range(0, d - 1):
            gens.append((("src_x", (p, d - 2 - p)), nz.effect_src_x((p, d - 2 - p))))
        if iii_side and d >= 6:
            # lower-filtration generators, needed for the even pure-x kills;
            # their second-order spill is mopped up by the outer iteration
            for size in range(d - 3, 1, -1):
                for p in range(size + 1):
                    gens.append((("src_x", (p, size - p)), nz.effect_src_x((p, size - p))))
            for m, n in ((1, 1), (0, 2), (2, 1), (1, 2), (3, 1), (2, 2), (0, 3)):
                if 4 <= m + 3 * n <= d:
                    gens.append((("tgt", (m, n)), nz.effect_tgt_func(m, n)))
        lower = [(i, j) for (i, j) in _all_slots(3, d - 1) if i > 0]
        rows = lower + targets
        mat = [[g[1].get(r, _ZERO) for g in gens] for r in rows]
        rhs = [Fraction(0)] * len(lower) + [-nz.a(i, j) for (i, j) in targets]
        sol = _solve_linear(mat, rhs)
        if sol is None:
            raise InternalError(f"degree-{d} slots of the x^2 y branch resist removal")
        for (gen_spec, _eff), coef in zip(gens, sol):
            if coef == 0:
                continue
            kind, data = gen_spec
            if kind == "src_x":
                nz.src_x(data, coef)
            else:
                nz.tgt_func(data[0], data[1], coef)
            fired = True
    nz.kill_pure_y()
    return fired


def _all_slots(dmin: int, dmax: int):
    for d in range(dmin, dmax + 1):
        for i in range(d + 1):
            yield (i, d - i)


def _stabilize_x2y(nz: _Normalizer, iii_side: bool, fuel: int = 50):
    for _ in range(fuel):
        if not _sweep_x2y(nz, iii_side):
            # confirm nothing removable is left
            leftovers = [(i, j) for (i, j) in nz.pair.second.coeffs
                         if (i + j >= 4 or (i == 0 and j >= 2))
                         and not _x2y_keep(i, j, iii_side) and i > 0]
            if not leftovers:
                return
        # else: keep iterating on second-order spill
    raise InternalError("x^2 y branch normalization did not stabilize")


def _solve_linear(mat, rhs):
    """Solve mat @ x = rhs exactly; returns one solution or None."""
    m = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    rows, cols = len(m), len(mat[0]) if mat else 0
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if m[i][cols] != 0:
            return None
    sol = [Fraction(0)] * cols
    for i, c in enumerate(piv_cols):
        sol[c] = m[i][cols]
    return sol


@dataclass
class GermAnalysis:
    etype: EquiType
    normalized: PlaneGermJet
    decisive: object  # value of the last open condition that fired
    left: PlaneGermJet
    right: PlaneGermJet


def analyze_germ(germ: PlaneGermJet, partial: bool = False) -> GermAnalysis:
    """Full recognition: stage-one form, branch normalization, table tag.

    With partial=True an undecided chain (stored order below the determining
    order) yields the normalized germ with an 'undetermined' type instead of
    raising OrderTooLow."""
    nz = to_y_h(germ)
    try:
        return _analyze_branches(nz)
    except OrderTooLow:
        if not partial:
            raise
        return GermAnalysis(EquiType("undetermined"), nz.pair, _ZERO, nz.left, nz.right)


def _analyze_branches(nz: "_Normalizer") -> GermAnalysis:
    k = nz.k

    def done(et: EquiType, decisive) -> GermAnalysis:
        return GermAnalysis(et, nz.pair, decisive, nz.left, nz.right)

    if nz.a(1, 0) != 0:
        return done(EquiType("regular", p=1, codim=0), nz.a(1, 0))

    a20, a11 = nz.a(2, 0), nz.a(1, 1)
    if a20 != 0:
        return done(EquiType("fold", p=2, codim=0), a20)
    if a11 != 0:
        # discriminant order: nu solves h_x(x, nu(x)) = 0
        hx = nz.pair.second.derivative("x")
        nu = solve_curve(hx, k)
        delta = compose_trunc(nz.pair.second, BivariateJet({(1, 0): 1}, k), nu, k)
        dmin = delta.min_degree()
        if dmin is None:
            raise OrderTooLow(f"II-chain undecided at order {k}; need order >= {k + 1}")
        if dmin == 2:
            return done(EquiType("fold", p=2, codim=0), a20)
        lead = delta.coeff(dmin, 0)
        return done(EquiType("II", k=dmin, p=dmin, codim=dmin - 1), lead)

    if k < 3:
        raise OrderTooLow("need order >= 3 beyond fold")
    a30, a21, a12 = nz.a(3, 0), nz.a(2, 1), nz.a(1, 2)

    if a30 != 0:
        t_inv = 3 * a30 * a12 - a21 * a21
        if t_inv != 0:
            nz.src_x((0, 1), -a21 / (3 * a30))
            nz.kill_pure_y()
            return done(EquiType("I", k=2, sign=_sign_or_none(t_inv), p=3, codim=3), t_inv)
        # I-chain: cubic reduces to x^3; full reduction to x^3 + x P(y)
        nz.src_x((0, 1), -a21 / (3 * a30))
        nz.kill_pure_y()
        nz.tgt_scale(1 / a30)
        for _ in range(200):
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
            raise InternalError("I-chain reduction did not terminate")
        if nz.a(1, 2) != 0:
            raise InternalError("shear failed to remove x y^2 in the I chain")
        for kk in range(3, k):
            pk = nz.a(1, kk)
            if pk != 0:
                sign = _sign_or_none(pk) if kk % 2 == 0 else None
                return done(EquiType("I", k=kk, sign=sign, p=kk + 1, codim=kk + 1,
                                     params={"p_series": _p_series(nz, k)}), pk)
        raise OrderTooLow(f"I-chain undecided at order {k}; need order >= {k + 1}")

    if a21 != 0:
        # III / IV branch: cubic is x^2 y after a shear
        nz.src_x((0, 1), -a12 / (2 * a21))
        nz.kill_pure_y()
        nz.tgt_scale(1 / a21)
        if k < 4:
            raise OrderTooLow("III/IV branch needs order >= 4")
        _stabilize_x2y(nz, iii_side=False)
        a40 = nz.a(4, 0)
        if a40 != 0:
            nz.src_scale(1, a40)
            nz.tgt_scale(1 / a40)
            _stabilize_x2y(nz, iii_side=True)
            if k < 5:
                raise OrderTooLow("III chain needs order >= 5")
            if nz.a(5, 0) != 0:
                return done(EquiType("III", k=2, p=5, codim=4), nz.a(5, 0))
            for d in range(7, k + 1, 2):
                lead = nz.a(d, 0)
                if lead != 0:
                    kk = (d - 1) // 2
                    return done(EquiType("III", k=kk, p=d, codim=kk + 2), lead)
            raise OrderTooLow(f"III-chain undecided at order {k}; need order >= {k + 1}")
        # IV side
        if k < 5:
            raise OrderTooLow("IV chain needs order >= 5")
        if nz.a(5, 0) != 0:
            return done(EquiType("IV", k=1, p=5, codim=5), nz.a(5, 0))
        if k < 6:
            raise OrderTooLow("IV_2 needs order >= 6")
        if nz.a(6, 0) != 0:
            return done(EquiType("IV", k=2, p=6, codim=6), nz.a(6, 0))
        return done(EquiType("degenerate-beyond-table"), _ZERO)

    if a12 != 0:
        # V branch: cubic x y^2
        nz.tgt_scale(1 / a12)
        if k < 4:
            raise OrderTooLow("V branch needs order >= 4")
        _clean_v_branch(nz)
        a40 = nz.a(4, 0)
        if a40 != 0:
            for _ in range(40):
                if nz.a(3, 1) == 0:
                    break
                nz.src_x((0, 1), -nz.a(3, 1) / (4 * nz.a(4, 0)))
                nz.kill_pure_y()
                _clean_v_branch(nz)
            else:
                raise InternalError("V_1 shear did not converge")
            lam = nz.a(4, 0)
            nz.src_scale(lam, lam ** 2)
            nz.tgt_scale(1 / lam ** 5)
            _clean_v_branch(nz)
            return done(EquiType("V", k=1, p=4, codim=5), a40)
        if nz.a(3, 1) != 0:
            return done(EquiType("V", k=2, p=4, codim=6,
                                 params={"d": nz.a(3, 1)}), nz.a(3, 1))
        return done(EquiType("degenerate-beyond-table"), _ZERO)

    # cubic vanishes entirely: VI family, decided on the 4-jet
    if k < 4:
        raise OrderTooLow("VI family needs order >= 4")
    a40, a31 = nz.a(4, 0), nz.a(3, 1)
    if a40 != 0:
        for _ in range(40):
            if nz.a(3, 1) == 0:
                break
            nz.src_x((0, 1), -nz.a(3, 1) / (4 * nz.a(4, 0)))
            nz.kill_pure_y()
        else:
            raise InternalError("VI shear did not converge")
        c_mod, d_mod = nz.a(2, 2), nz.a(1, 3)
        if c_mod != 0:
            return done(EquiType("VI", p=4, codim=6, params={"c": c_mod, "d": d_mod}), c_mod)
        return done(EquiType("VI_1", p=4, codim=7, params={"d": d_mod}), a40)
    if a31 != 0:
        return done(EquiType("degenerate-beyond-table"), _ZERO)
    if nz.a(2, 2) != 0:
        return done(EquiType("VI_2", p=4, codim=7,
                             params={"c": nz.a(2, 2), "d": nz.a(1, 3)}), nz.a(2, 2))
    return done(EquiType("degenerate-beyond-table"), _ZERO)


def _p_series(nz: _Normalizer, k: int) -> dict:
    return {j: nz.a(1, j) for j in range(2, k) if nz.a(1, j) != 0}


def _clean_v_branch(nz: _Normalizer, fuel: int = 400):
    """In the V branch (cubic x y^2): kill pure-y terms and every slot with
    y-degree >= 2 of total degree >= 4.  Slots x^i y and x^i stay; only their
    4-jet values are recognition data."""
    for _ in range(fuel):
        target = None
        for (i, j), c in sorted(nz.pair.second.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            if i == 0 and j >= 2:
                target = ("pure", i, j, c)
                break
            if i >= 1 and j >= 2 and i + j >= 4:
                target = ("j2", i, j, c)
                break
        if target is None:
            return
        kind, i, j, c = target
        if kind == "pure":
            nz.kill_pure_y()
        else:
            nz.src_x((i, j - 2), -c)
    raise InternalError("V-branch cleanup did not terminate")


def equisingularity_type(germ: PlaneGermJet) -> EquiType:
    """Table tag of a corank <= 1 plane germ; see analyze_germ."""
    return analyze_germ(germ).etype


def prenormalize_germ(germ: PlaneGermJet, k: int | None = None) -> PlaneGermJet:
    """A-equivalent staged normal form (y, h) of the germ.

    Pure-y terms are absorbed into the target, removable slots of the
    recognized branch are absorbed into the source, and for the I chain the
    result is (y, x^3 + x P(y)) exactly.  Use analyze_germ for the recorded
    changes.
    """
    if k is not None and k < germ.order:
        germ = PlaneGermJet(germ.first.truncate(k), germ.second.truncate(k))
    return analyze_germ(germ, partial=True).normalized
