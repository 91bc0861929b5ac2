"""Exact coefficient fields beyond plain rationals.

The jet algebra is written against duck-typed coefficients: anything with
field arithmetic, equality against 0/int, and promotion from int works.
Besides ``fractions.Fraction`` this module supplies two such fields:

* ``RatFunc``: the rational function field Q(t) in one indeterminate.  Used
  to sweep a viewpoint along a line with a generic parameter and then solve
  exactly for the special positions.
* ``AlgNum`` over an ``AlgField``: Q(theta) for a real root theta of an
  irreducible monic polynomial of degree 2 or 3, with exact sign tests via
  interval refinement.  This backs the optional one-root extension mode.

Polynomials here are tuples of Fractions, constant term first, with no
trailing zeros.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Poly = tuple  # tuple[Fraction, ...], low degree first, normalized


def poly_norm(cs: Sequence) -> Poly:
    cs = [Fraction(c) if not isinstance(c, Fraction) else c for c in cs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return poly_norm(out)


def poly_neg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return poly_norm(out)


def poly_scale(a: Poly, s) -> Poly:
    if s == 0:
        return ()
    return tuple(c * s for c in a)


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b) and a:
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - len(b)
        coef = a[-1] * inv_lead
        q[k] = coef
        for i, cb in enumerate(b):
            a[k + i] -= coef * cb
        a.pop()
    return poly_norm(q), poly_norm(a)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    a, b = poly_norm(a), poly_norm(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if a:
        a = poly_scale(a, 1 / a[-1])  # monic
    return a


def poly_deriv(a: Poly) -> Poly:
    return poly_norm([i * c for i, c in enumerate(a)][1:])


def poly_eval(a: Poly, x):
    out = Fraction(0)
    for c in reversed(a):
        out = out * x + c
    return out


class RatFunc:
    """Element of Q(t): a reduced fraction of polynomials over Q.

    Denominators are kept monic so equality is plain attribute equality.
    Mixed arithmetic with int and Fraction promotes automatically.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        if isinstance(num, RatFunc):
            self.num, self.den = num.num, num.den
            return
        n = num if isinstance(num, tuple) else poly_norm([Fraction(num)])
        d = den if isinstance(den, tuple) else poly_norm([Fraction(den)])
        if not d:
            raise ZeroDivisionError("zero denominator in RatFunc")
        if n:
            g = poly_gcd(n, d)
            if len(g) > 1:
                n = poly_divmod(n, g)[0]
                d = poly_divmod(d, g)[0]
            lead = d[-1]
            if lead != 1:
                n = poly_scale(n, 1 / lead)
                d = poly_scale(d, 1 / lead)
        else:
            d = (Fraction(1),)
        self.num, self.den = n, d

    @staticmethod
    def var() -> "RatFunc":
        return RatFunc((Fraction(0), Fraction(1)))

    @staticmethod
    def _coerce(x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFunc(x)
        return NotImplemented

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFunc(poly_add(poly_mul(self.num, o.den), poly_mul(o.num, self.den)),
                       poly_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(poly_neg(self.num), self.den)

    def __sub__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFunc(poly_mul(self.num, o.num), poly_mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by zero RatFunc")
        return RatFunc(poly_mul(self.num, o.den), poly_mul(self.den, o.num))

    def __rtruediv__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return 1 / (self ** (-n))
        out = RatFunc(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def subs(self, value):
        """Evaluate at a rational value of the indeterminate."""
        den = poly_eval(self.den, value)
        if den == 0:
            raise ZeroDivisionError("pole of RatFunc at substitution point")
        return poly_eval(self.num, value) / den

    def as_fraction(self) -> Fraction:
        """Return the value if constant, else raise."""
        if len(self.num) > 1 or len(self.den) > 1:
            raise ValueError("RatFunc is not constant")
        return (self.num[0] if self.num else Fraction(0)) / self.den[0]

    def __repr__(self):
        def fmt(p):
            if not p:
                return "0"
            terms = []
            for i, c in enumerate(p):
                if c == 0:
                    continue
                if i == 0:
                    terms.append(str(c))
                elif i == 1:
                    terms.append(f"{c}*t")
                else:
                    terms.append(f"{c}*t^{i}")
            return " + ".join(terms)

        if self.den == (Fraction(1),):
            return f"RatFunc({fmt(self.num)})"
        return f"RatFunc(({fmt(self.num)})/({fmt(self.den)}))"


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, poly_deriv(p)]
    while seq[-1]:
        rem = poly_divmod(seq[-2], seq[-1])[1]
        if not rem:
            break
        seq.append(poly_neg(rem))
    return seq


def _sign_variations(seq: list[Poly], x: Fraction) -> int:
    signs = []
    for p in seq:
        v = poly_eval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Poly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of squarefree p in (lo, hi]."""
    seq = sturm_sequence(p)
    return _sign_variations(seq, lo) - _sign_variations(seq, hi)


def isolate_real_roots(p: Poly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals (lo, hi] for the real roots of squarefree p."""
    if len(p) <= 1:
        return []
    bound = 1 + max(abs(c / p[-1]) for c in p[:-1]) if len(p) > 1 else Fraction(1)
    seq = sturm_sequence(p)
    out = []
    stack = [(-bound - 1, bound + 1)]
    while stack:
        lo, hi = stack.pop()
        n = _sign_variations(seq, lo) - _sign_variations(seq, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort()
    return out


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The fraction with the smallest denominator in the closed interval."""
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    # 0 < lo <= hi: continued-fraction descent
    fl = lo.numerator // lo.denominator
    if fl + 1 <= hi:
        return Fraction(fl if fl >= lo else fl + 1)
    frac_lo = lo - fl
    if frac_lo == 0:
        return lo
    rest = simplest_between(1 / (hi - fl), 1 / frac_lo)
    return fl + 1 / rest


def rational_roots(coeffs: Sequence) -> list[Fraction]:
    """All rational roots of a nonzero univariate polynomial over Q, sorted."""
    p = poly_norm(coeffs)
    if not p:
        raise ValueError("zero polynomial has every root")
    roots = []
    # factor out powers of t
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
        p = p[k:]
    if len(p) <= 1:
        return roots
    g = poly_gcd(p, poly_deriv(p))
    if len(g) > 1:
        p = poly_divmod(p, g)[0]
    if len(p) == 2:
        roots.append(-p[0] / p[1])
        return sorted(set(roots))
    for lo, hi in isolate_real_roots(p):
        for _ in range(512):
            mid = (lo + hi) / 2
            v = poly_eval(p, mid)
            if v == 0:
                roots.append(mid)
                break
            cand = simplest_between(lo, hi)
            if cand != lo and poly_eval(p, cand) == 0:
                roots.append(cand)
                break
            if poly_eval(p, lo) * v < 0:
                hi = mid
            else:
                lo = mid
            if hi - lo < Fraction(1, 10 ** 40):
                break  # treat as irrational
    return sorted(set(roots))


class AlgField:
    """Real algebraic extension Q(theta), theta a root of an irreducible
    monic polynomial of degree 2 or 3 isolated in (lo, hi)."""

    def __init__(self, min_poly: Sequence, lo, hi):
        p = poly_norm(min_poly)
        if len(p) not in (3, 4):
            raise ValueError("only degree 2 or 3 extensions are supported")
        if p[-1] != 1:
            p = poly_scale(p, 1 / p[-1])
        if rational_roots(p):
            raise ValueError("minimal polynomial is reducible over Q")
        self.min_poly = p
        self.deg = len(p) - 1
        lo, hi = Fraction(lo), Fraction(hi)
        if poly_eval(p, lo) * poly_eval(p, hi) >= 0:
            raise ValueError("interval does not isolate a root")
        self._lo, self._hi = lo, hi

    def refine(self):
        mid = (self._lo + self._hi) / 2
        if poly_eval(self.min_poly, self._lo) * poly_eval(self.min_poly, mid) < 0:
            self._hi = mid
        else:
            self._lo = mid

    def gen(self) -> "AlgNum":
        cs = [Fraction(0)] * self.deg
        cs[1] = Fraction(1)
        return AlgNum(self, tuple(cs))

    def num(self, value) -> "AlgNum":
        cs = [Fraction(0)] * self.deg
        cs[0] = Fraction(value)
        return AlgNum(self, tuple(cs))

    def sign_of(self, coeffs: tuple) -> int:
        """Exact sign of c0 + c1*theta (+ c2*theta^2)."""
        if all(c == 0 for c in coeffs):
            return 0
        for _ in range(20000):
            lo, hi = self._lo, self._hi
            vals = [poly_eval(poly_norm(coeffs) or (Fraction(0),), x)
                    for x in (lo, hi, (lo + hi) / 2)]
            # crude exact interval bound via monotone refinement: test by
            # interval arithmetic on the Horner form
            bl, bh = _interval_eval(poly_norm(coeffs), lo, hi)
            if bl > 0:
                return 1
            if bh < 0:
                return -1
            self.refine()
        raise InternalGuard("sign refinement did not converge")


class InternalGuard(RuntimeError):
    pass


def _interval_eval(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    vlo, vhi = Fraction(0), Fraction(0)
    for c in reversed(p or (Fraction(0),)):
        cands = (vlo * lo, vlo * hi, vhi * lo, vhi * hi)
        vlo, vhi = min(cands) + c, max(cands) + c
    return vlo, vhi


class AlgNum:
    """Element of an AlgField, stored by its coordinate tuple over 1, theta, theta^2."""

    __slots__ = ("field", "coords")

    def __init__(self, field: AlgField, coords: tuple):
        self.field = field
        self.coords = tuple(Fraction(c) for c in coords)

    def _co(self, other):
        if isinstance(other, AlgNum):
            if other.field is not self.field:
                raise ValueError("mixing elements of different extensions")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.num(other)
        return NotImplemented

    def __bool__(self):
        return any(c != 0 for c in self.coords)

    def __eq__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coords == o.coords

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgNum(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return AlgNum(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        prod = poly_mul(poly_norm(self.coords), poly_norm(o.coords))
        rem = poly_divmod(prod, self.field.min_poly)[1]
        cs = list(rem) + [Fraction(0)] * (self.field.deg - len(rem))
        return AlgNum(self.field, tuple(cs[:self.field.deg]))

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero algebraic number")
        # extended Euclid: a*self + b*min_poly = 1 in Q[t]
        a = poly_norm(self.coords)
        r0, r1 = self.field.min_poly, a
        s0, s1 = (), (Fraction(1),)
        while True:
            q, r = poly_divmod(r0, r1)
            if not r:
                break
            s0, s1 = s1, poly_add(s0, poly_neg(poly_mul(q, s1)))
            r0, r1 = r1, r
        # r1 is a nonzero constant gcd (min_poly irreducible)
        inv = poly_scale(s1, 1 / r1[0])
        rem = poly_divmod(inv, self.field.min_poly)[1]
        cs = list(rem) + [Fraction(0)] * (self.field.deg - len(rem))
        return AlgNum(self.field, tuple(cs[:self.field.deg]))

    def __truediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.num(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sign(self) -> int:
        return self.field.sign_of(self.coords)

    def __lt__(self, other):
        o = self._co(other)
        return (self - o).sign() < 0

    def __gt__(self, other):
        o = self._co(other)
        return (self - o).sign() > 0

    def __repr__(self):
        return f"AlgNum{self.coords}"


def best_rational_within(x: Fraction, tol: Fraction) -> Fraction:
    """Smallest-denominator rational within tol of x (continued fractions)."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    if tol == 0:
        return x
    return simplest_between(x - tol, x + tol)
