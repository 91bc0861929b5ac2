"""Truncated polynomial arithmetic with exact coefficients.

A jet is a sparse table from exponent tuples to coefficients together with a
truncation order k: terms of total degree > k are discarded by every
operation.  Coefficients are exact: plain ``fractions.Fraction`` everywhere
in normal use, but any field type with the same operator surface works
(``fields.RatFunc`` for one-parameter sweeps, ``fields.AlgNum`` in the
optional extension mode).  Integer inputs are promoted to Fraction.

  BivariateJet   keys (i, j)     represents  sum c_ij x^i y^j,  i+j <= order
  TrivariateJet  keys (i, j, l)  represents  sum c_ijl x^i y^j z^l
  MongeJet       a BivariateJet of order >= 2 with no constant or linear part

Tables are canonical: zero coefficients are never stored, so equality is
table equality.  All values are immutable by convention; operations return
new jets and never mutate, which makes everything safe to share across
threads.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .errors import DegenerateImplicit, InternalError, NonvanishingConstantTerm, OrderTooLow

_ZERO = Fraction(0)


def _promote(c):
    return Fraction(c) if isinstance(c, int) else c


def _norm_table(table: Mapping, order: int, nvars: int) -> dict:
    out = {}
    for key, c in table.items():
        key = tuple(key)
        if len(key) != nvars or any(e < 0 for e in key):
            raise ValueError(f"bad exponent tuple {key}")
        c = _promote(c)
        if c == 0:
            continue
        if sum(key) > order:
            continue
        out[key] = c
    return out


def _add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, _ZERO) + c
        if s == 0:
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _neg(a: dict) -> dict:
    return {k: -c for k, c in a.items()}


def _scale(a: dict, s) -> dict:
    s = _promote(s)
    if s == 0:
        return {}
    return {k: c * s for k, c in a.items()}


def _mul(a: dict, b: dict, order: int) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    bitems = sorted(((sum(kb), kb, cb) for kb, cb in b.items()))
    two = len(next(iter(a))) == 2
    for ka, ca in a.items():
        rem = order - sum(ka)
        if two:
            ka0, ka1 = ka
            for db, kb, cb in bitems:
                if db > rem:
                    break
                key = (ka0 + kb[0], ka1 + kb[1])
                s = out.get(key, _ZERO) + ca * cb
                if s == 0:
                    del out[key]
                else:
                    out[key] = s
        else:
            ka0, ka1, ka2 = ka
            for db, kb, cb in bitems:
                if db > rem:
                    break
                key = (ka0 + kb[0], ka1 + kb[1], ka2 + kb[2])
                s = out.get(key, _ZERO) + ca * cb
                if s == 0:
                    del out[key]
                else:
                    out[key] = s
    return out


def _truncate(a: dict, k: int) -> dict:
    return {key: c for key, c in a.items() if sum(key) <= k}


def _compose(fdict: dict, args: list[dict], order: int, nvars_out: int) -> dict:
    """Substitute args[m] for variable m of fdict; all args zero-constant.

    Runs Horner-style: two-argument composition assembles rows of fixed
    first-variable exponent from cached powers of the second argument and
    folds them with one multiplication per row; more arguments recurse on
    the last variable.
    """
    if not fdict:
        return {}
    if len(args) == 2:
        A, B = args
        rows2: dict[int, dict] = {}
        max_j = 0
        for (i, j), c in fdict.items():
            rows2.setdefault(i, {})[j] = c
            if j > max_j:
                max_j = j
        b_pow = [{(0,) * nvars_out: Fraction(1)}]
        for _ in range(max_j):
            b_pow.append(_mul(b_pow[-1], B, order))
        out: dict = {}
        for i in range(max(rows2), -1, -1):
            if out:
                out = _mul(out, A, order)
            row = rows2.get(i)
            if row:
                for j, c in row.items():
                    out = _add(out, _scale(b_pow[j], c))
        return out
    rows: dict[int, dict] = {}
    for key, c in fdict.items():
        rows.setdefault(key[-1], {})[key[:-1]] = c
    last = args[-1]
    out = {}
    for e in range(max(rows), -1, -1):
        if out:
            out = _mul(out, last, order)
        if e in rows:
            out = _add(out, _compose(rows[e], args[:-1], order, nvars_out))
    return out


def _min_degree(a: dict) -> int | None:
    return min((sum(k) for k in a), default=None)


class BivariateJet:
    """Truncated polynomial in x, y; see module docstring."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Mapping, order: int):
        if order < 0:
            raise ValueError("order must be nonnegative")
        self.coeffs = _norm_table(coeffs, order, 2)
        self.order = order

    @staticmethod
    def zero(order: int) -> "BivariateJet":
        return BivariateJet({}, order)

    @staticmethod
    def variable(name: str, order: int) -> "BivariateJet":
        key = (1, 0) if name == "x" else (0, 1)
        return BivariateJet({key: 1}, order)

    def coeff(self, i: int, j: int):
        return self.coeffs.get((i, j), _ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_degree(self) -> int | None:
        return _min_degree(self.coeffs)

    def truncate(self, k: int) -> "BivariateJet":
        if k >= self.order:
            return self
        return BivariateJet(_truncate(self.coeffs, k), k)

    def extend(self, k: int) -> "BivariateJet":
        """Reinterpret as a polynomial: coefficients above the stored order are zero."""
        if k <= self.order:
            return self.truncate(k)
        return BivariateJet(self.coeffs, k)

    def homogeneous_part(self, d: int) -> dict:
        return {k: c for k, c in self.coeffs.items() if sum(k) == d}

    def derivative(self, var: str) -> "BivariateJet":
        idx = 0 if var == "x" else 1
        out = {}
        for (i, j), c in self.coeffs.items():
            e = (i, j)[idx]
            if e:
                key = (i - 1, j) if idx == 0 else (i, j - 1)
                out[key] = c * e
        return BivariateJet(out, max(self.order - 1, 0))

    def eval(self, x, y):
        out = _ZERO
        for (i, j), c in self.coeffs.items():
            out = out + c * _promote(x) ** i * _promote(y) ** j
        return out

    def map_coeffs(self, fn) -> "BivariateJet":
        return BivariateJet({k: fn(c) for k, c in self.coeffs.items()}, self.order)

    def __add__(self, other: "BivariateJet") -> "BivariateJet":
        order = min(self.order, other.order)
        return BivariateJet(_truncate(_add(self.coeffs, other.coeffs), order), order)

    def __sub__(self, other: "BivariateJet") -> "BivariateJet":
        return self + (-other)

    def __neg__(self) -> "BivariateJet":
        return BivariateJet(_neg(self.coeffs), self.order)

    def __mul__(self, other):
        if isinstance(other, BivariateJet):
            order = min(self.order, other.order)
            return BivariateJet(_mul(self.coeffs, other.coeffs, order), order)
        return BivariateJet(_scale(self.coeffs, other), self.order)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BivariateJet):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return f"BivariateJet(0; order={self.order})"
        terms = []
        for (i, j) in sorted(self.coeffs, key=lambda k: (sum(k), k[1])):
            c = self.coeffs[(i, j)]
            mono = "".join(s for s, e in (("x", i), ("y", j)) if e for s in [s + (f"^{e}" if e > 1 else "")])
            terms.append(f"{c}" + ("*" + mono if mono else ""))
        return f"BivariateJet({' + '.join(terms)}; order={self.order})"


class TrivariateJet:
    """Truncated polynomial in x, y, z with the same conventions."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Mapping, order: int):
        if order < 0:
            raise ValueError("order must be nonnegative")
        self.coeffs = _norm_table(coeffs, order, 3)
        self.order = order

    @staticmethod
    def zero(order: int) -> "TrivariateJet":
        return TrivariateJet({}, order)

    @staticmethod
    def variable(name: str, order: int) -> "TrivariateJet":
        key = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}[name]
        return TrivariateJet({key: 1}, order)

    def coeff(self, i: int, j: int, l: int):
        return self.coeffs.get((i, j, l), _ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, k: int) -> "TrivariateJet":
        if k >= self.order:
            return self
        return TrivariateJet(_truncate(self.coeffs, k), k)

    def __add__(self, other: "TrivariateJet") -> "TrivariateJet":
        order = min(self.order, other.order)
        return TrivariateJet(_truncate(_add(self.coeffs, other.coeffs), order), order)

    def __sub__(self, other: "TrivariateJet") -> "TrivariateJet":
        return self + (-other)

    def __neg__(self) -> "TrivariateJet":
        return TrivariateJet(_neg(self.coeffs), self.order)

    def __mul__(self, other):
        if isinstance(other, TrivariateJet):
            order = min(self.order, other.order)
            return TrivariateJet(_mul(self.coeffs, other.coeffs, order), order)
        return TrivariateJet(_scale(self.coeffs, other), self.order)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TrivariateJet):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"TrivariateJet({len(self.coeffs)} terms; order={self.order})"


class MongeJet:
    """Surface germ z = f(x, y) with f(0) = 0 and df(0) = 0."""

    __slots__ = ("jet",)

    def __init__(self, jet: BivariateJet):
        if jet.order < 2:
            raise ValueError("a Monge jet needs order >= 2")
        for key in ((0, 0), (1, 0), (0, 1)):
            if key in jet.coeffs:
                raise ValueError(f"Monge jet has nonzero coefficient at {key}")
        self.jet = jet

    @staticmethod
    def from_terms(coeffs: Mapping, order: int) -> "MongeJet":
        return MongeJet(BivariateJet(coeffs, order))

    @property
    def order(self) -> int:
        return self.jet.order

    def coeff(self, i: int, j: int):
        return self.jet.coeff(i, j)

    def truncate(self, k: int) -> "MongeJet":
        if k < 2:
            raise OrderTooLow("cannot truncate a Monge jet below order 2")
        return MongeJet(self.jet.truncate(k))

    def extend(self, k: int) -> "MongeJet":
        return MongeJet(self.jet.extend(k))

    def __eq__(self, other):
        if not isinstance(other, MongeJet):
            return NotImplemented
        return self.jet == other.jet

    def __hash__(self):
        return hash(self.jet)

    def __repr__(self):
        return f"MongeJet({self.jet!r})"


def mul_trunc(p: BivariateJet, q: BivariateJet, k: int) -> BivariateJet:
    """Product of p and q with all terms of total degree > k discarded."""
    return BivariateJet(_mul(p.coeffs, q.coeffs, k), k)


def compose_trunc(f: BivariateJet, sx: BivariateJet, sy: BivariateJet, k: int) -> BivariateJet:
    """f(sx, sy) truncated at degree k; sx, sy must have no constant term."""
    for s, name in ((sx, "sx"), (sy, "sy")):
        if (0, 0) in s.coeffs:
            raise NonvanishingConstantTerm(f"{name} has a constant term")
    return BivariateJet(_compose(f.coeffs, [sx.coeffs, sy.coeffs], k, 2), k)


def subst_trivariate(f: BivariateJet, ax: TrivariateJet, ay: TrivariateJet, k: int) -> TrivariateJet:
    """f(ax, ay) for trivariate arguments without constant term."""
    for s, name in ((ax, "ax"), (ay, "ay")):
        if (0, 0, 0) in s.coeffs:
            raise NonvanishingConstantTerm(f"{name} has a constant term")
    return TrivariateJet(_compose(f.coeffs, [ax.coeffs, ay.coeffs], k, 3), k)


def subst_z(F: TrivariateJet, g: BivariateJet, k: int) -> BivariateJet:
    """F(x, y, g(x, y)) truncated at k; g must have no constant term."""
    if (0, 0) in g.coeffs:
        raise NonvanishingConstantTerm("g has a constant term")
    x = {(1, 0): Fraction(1)}
    y = {(0, 1): Fraction(1)}
    return BivariateJet(_compose(F.coeffs, [x, y, g.coeffs], k, 2), k)


def inverse_unit(p: BivariateJet, k: int) -> BivariateJet:
    """1/p as a jet; requires a nonzero constant term (geometric series)."""
    u = p.coeffs.get((0, 0), _ZERO)
    if u == 0:
        raise DegenerateImplicit("no multiplicative inverse: constant term is zero")
    r = _scale(_add(p.coeffs, {(0, 0): -u}), 1 / _promote(u))  # p/u - 1, no constant term
    out = {(0, 0): Fraction(1)}
    power = {(0, 0): Fraction(1)}
    for _ in range(k):
        power = _scale(_mul(power, r, k), -1)
        if not power:
            break
        out = _add(out, power)
    return BivariateJet(_scale(out, 1 / _promote(u)), k)


def inverse_unit3(p: TrivariateJet, k: int) -> TrivariateJet:
    """Trivariate version of inverse_unit."""
    u = p.coeffs.get((0, 0, 0), _ZERO)
    if u == 0:
        raise DegenerateImplicit("no multiplicative inverse: constant term is zero")
    r = _scale(_add(p.coeffs, {(0, 0, 0): -u}), 1 / _promote(u))
    out = {(0, 0, 0): Fraction(1)}
    power = {(0, 0, 0): Fraction(1)}
    for _ in range(k):
        power = _scale(_mul(power, r, k), -1)
        if not power:
            break
        out = _add(out, power)
    return TrivariateJet(_scale(out, 1 / _promote(u)), k)


def solve_curve(G: BivariateJet, k: int) -> BivariateJet:
    """The series u(x) with u(0) = 0 and G(x, u(x)) = 0 mod degree > k.

    G is bivariate with variables (x, u); requires G(0,0) = 0 and a nonzero
    coefficient of u.  The result is returned as a jet in x alone.
    """
    if G.coeffs.get((0, 0), _ZERO) != 0:
        raise DegenerateImplicit("G(0,0) != 0")
    c = G.coeffs.get((0, 1), _ZERO)
    if c == 0:
        raise DegenerateImplicit("coefficient of u in G vanishes")
    u: dict = {}
    x_arg = {(1, 0): Fraction(1)}
    for d in range(1, k + 1):
        residual = _compose(_truncate(G.coeffs, d), [x_arg, u], d, 2)
        part = {key: v for key, v in residual.items() if sum(key) == d}
        if not part:
            continue
        u = _add(u, _scale(part, -1 / _promote(c)))
    check = _compose(G.coeffs, [x_arg, u], k, 2)
    if check:
        raise InternalError("univariate implicit solve left a residual")
    return BivariateJet(u, k)


def solve_implicit(F: TrivariateJet, k: int) -> BivariateJet:
    """The unique g with g(0) = 0 and F(x, y, g(x, y)) = 0 mod degree > k.

    Solved order by order: the degree-d part of g is the degree-d residual
    divided by -F_z(0).  The solution is substituted back and the residual
    asserted to vanish, so a returned jet is always certified.
    """
    if F.coeffs.get((0, 0, 0), _ZERO) != 0:
        raise DegenerateImplicit("F(0,0,0) != 0")
    c = F.coeffs.get((0, 0, 1), _ZERO)
    if c == 0:
        raise DegenerateImplicit("coefficient of z in F vanishes")
    g: dict = {}
    for d in range(1, k + 1):
        residual = _compose(_truncate(F.coeffs, d), [{(1, 0): Fraction(1)}, {(0, 1): Fraction(1)}, g], d, 2)
        part = {key: v for key, v in residual.items() if sum(key) == d}
        if not part:
            continue
        g = _add(g, _scale(part, -1 / _promote(c)))
    check = _compose(F.coeffs, [{(1, 0): Fraction(1)}, {(0, 1): Fraction(1)}, g], k, 2)
    if check:
        raise InternalError("implicit solve left a nonzero residual")
    return BivariateJet(g, k)
