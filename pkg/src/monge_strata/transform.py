"""The ten-parameter projective group fixing the origin and the plane z = 0.

An element acts on homogeneous coordinates [x : y : z : 1] by the matrix

    [ u1 u2 u3 0 ]        q1 = u1 x + u2 y + u3 z
    [ v1 v2 v3 0 ]        q2 = v1 x + v2 y + v3 z
    [ 0  0  c  0 ]        q3 = c z
    [ w1 w2 w3 1 ]        p  = 1 + w1 x + w2 y + w3 z

and on a Monge graph z = f(x, y) by pullback: the transformed jet g is the
unique solution of q3/p = f(q1/p, q2/p) on the graph of g, computed by an
order-by-order implicit solve.  The invariants c != 0 and u1 v2 - u2 v1 != 0
guarantee the image surface is again a Monge graph over z = 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalError, InvalidTransform, IrrationalNormalization, OrderTooLow
from .jets import (BivariateJet, MongeJet, TrivariateJet, inverse_unit3,
                   solve_implicit, subst_trivariate)


@dataclass(frozen=True)
class ProjTransform:
    u1: Fraction
    u2: Fraction
    u3: Fraction
    v1: Fraction
    v2: Fraction
    v3: Fraction
    c: Fraction
    w1: Fraction
    w2: Fraction
    w3: Fraction

    def __post_init__(self):
        for name in ("u1", "u2", "u3", "v1", "v2", "v3", "c", "w1", "w2", "w3"):
            v = getattr(self, name)
            if isinstance(v, int):
                object.__setattr__(self, name, Fraction(v))

    @staticmethod
    def identity() -> "ProjTransform":
        return ProjTransform(1, 0, 0, 0, 1, 0, 1, 0, 0, 0)

    @staticmethod
    def linear(u1, u2, v1, v2, c) -> "ProjTransform":
        return ProjTransform(u1, u2, 0, v1, v2, 0, c, 0, 0, 0)

    @staticmethod
    def diagonal(u1, v2, c) -> "ProjTransform":
        return ProjTransform(u1, 0, 0, 0, v2, 0, c, 0, 0, 0)

    def is_valid(self) -> bool:
        return self.c != 0 and (self.u1 * self.v2 - self.u2 * self.v1) != 0

    def validate(self) -> None:
        if not self.is_valid():
            raise InvalidTransform("need c != 0 and u1*v2 - u2*v1 != 0")

    def matrix(self) -> list[list[Fraction]]:
        z = Fraction(0)
        return [
            [self.u1, self.u2, self.u3, z],
            [self.v1, self.v2, self.v3, z],
            [z, z, self.c, z],
            [self.w1, self.w2, self.w3, Fraction(1)],
        ]

    def inverse(self) -> "ProjTransform":
        """Group inverse, computed blockwise over the rationals."""
        self.validate()
        det = self.u1 * self.v2 - self.u2 * self.v1
        # inverse of the 2x2 block
        b11, b12 = self.v2 / det, -self.u2 / det
        b21, b22 = -self.v1 / det, self.u1 / det
        # inverse of A = [[B, t], [0, c]] is [[B^-1, -B^-1 t / c], [0, 1/c]]
        iu3 = -(b11 * self.u3 + b12 * self.v3) / self.c
        iv3 = -(b21 * self.u3 + b22 * self.v3) / self.c
        # w-row of the inverse is -w . A^-1
        iw1 = -(self.w1 * b11 + self.w2 * b21)
        iw2 = -(self.w1 * b12 + self.w2 * b22)
        iw3 = -(self.w1 * iu3 + self.w2 * iv3 + self.w3 / self.c)
        return ProjTransform(b11, b12, iu3, b21, b22, iv3, 1 / self.c, iw1, iw2, iw3)


def compose(first: ProjTransform, then: ProjTransform) -> ProjTransform:
    """The transform equivalent to applying ``first`` and then ``then``.

    With the pullback convention, apply(then, apply(first, f)) equals
    apply(compose(first, then), f); the matrix is M_first @ M_then.
    """
    a, b = first.matrix(), then.matrix()
    m = [[sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)] for i in range(4)]
    return ProjTransform(m[0][0], m[0][1], m[0][2],
                         m[1][0], m[1][1], m[1][2],
                         m[2][2],
                         m[3][0], m[3][1], m[3][2])


@dataclass(frozen=True)
class PointClass2:
    """The projective class of the second fundamental form at the origin."""

    kind: str  # elliptic | hyperbolic | parabolic | flat-umbilic


def apply_transform(t: ProjTransform, f: MongeJet, k: int) -> MongeJet:
    """Pull the Monge jet f back along t, truncated at order k."""
    t.validate()
    if f.order < k:
        raise OrderTooLow(f"jet order {f.order} < requested order {k}")
    if k < 2:
        raise OrderTooLow("transformed jets are stored at order >= 2")
    q1 = TrivariateJet({(1, 0, 0): t.u1, (0, 1, 0): t.u2, (0, 0, 1): t.u3}, k)
    q2 = TrivariateJet({(1, 0, 0): t.v1, (0, 1, 0): t.v2, (0, 0, 1): t.v3}, k)
    q3 = TrivariateJet({(0, 0, 1): t.c}, k)
    p = TrivariateJet({(0, 0, 0): 1, (1, 0, 0): t.w1, (0, 1, 0): t.w2, (0, 0, 1): t.w3}, k)
    invp = inverse_unit3(p, k)
    big_f = q3 * invp - subst_trivariate(f.jet.truncate(k), q1 * invp, q2 * invp, k)
    g = solve_implicit(big_f, k)
    for key in ((1, 0), (0, 1)):
        if key in g.coeffs:
            raise InternalError("transformed jet acquired a linear term")
    return MongeJet(g)


def _is_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return _isqrt_exact(n) is not None and _isqrt_exact(d) is not None


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = int(n ** 0.5)
    for cand in (r - 1, r, r + 1, r + 2):
        if cand >= 0 and cand * cand == n:
            return cand
    import math
    r = math.isqrt(n)
    return r if r * r == n else None


def sqrt_fraction(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    rn = _isqrt_exact(q.numerator)
    rd = _isqrt_exact(q.denominator)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def prenormalize_2jet(f: MongeJet) -> tuple[ProjTransform, MongeJet, PointClass2]:
    """Bring the 2-jet to a standard representative by linear changes only.

    Returns (t, g, kind) with g = apply_transform(t, f, f.order) and 2-jet of
    g equal to xy (hyperbolic), y^2 (parabolic), 0 (flat umbilic), or, in the
    elliptic case, x^2 + lam y^2 with lam > 0, rescaled to x^2 + y^2 exactly
    when lam is a rational square.  Hyperbolic prenormalization needs the
    asymptotic directions to be rational; otherwise IrrationalNormalization
    is raised carrying the direction polynomial.
    """
    if f.order < 3:
        raise OrderTooLow("prenormalize_2jet needs order >= 3")
    c20, c11, c02 = f.coeff(2, 0), f.coeff(1, 1), f.coeff(0, 2)
    disc = c11 * c11 - 4 * c20 * c02

    if c20 == 0 and c11 == 0 and c02 == 0:
        t = ProjTransform.identity()
        return t, f, PointClass2("flat-umbilic")

    if disc == 0:
        # rank one: bring to y^2
        if c02 != 0:
            beta = c11 / (2 * c02)
            t = ProjTransform.linear(1, 0, -beta, 1, c02)
        else:
            # c02 = 0 forces c11 = 0, so the form is c20 x^2: swap axes
            t = ProjTransform.linear(0, 1, 1, 0, c20)
        g = apply_transform(t, f, f.order)
        return t, g, PointClass2("parabolic")

    if disc < 0:
        # definite: make it positive definite, then complete the square
        t = ProjTransform.identity()
        if c20 < 0:
            t = ProjTransform.diagonal(1, 1, -1)
            c20, c11, c02 = -c20, -c11, -c02
        alpha = c11 / (2 * c20)
        lam = (c02 - c11 * c11 / (4 * c20)) / c20
        t = compose(t, ProjTransform.linear(1, -alpha, 0, 1, c20))
        root = sqrt_fraction(1 / lam)
        if root is not None:
            t = compose(t, ProjTransform.linear(1, 0, 0, root, 1))
        g = apply_transform(t, f, f.order)
        return t, g, PointClass2("elliptic")

    # disc > 0: indefinite, target xy
    if c20 == 0 and c02 == 0:
        t = ProjTransform.linear(1, 0, 0, 1, c11)
    elif c20 == 0:
        t = ProjTransform.linear(1, -c02 / c11, 0, 1, c11)
    elif c02 == 0:
        # mirror case: form is x(c11 y + c20 x)
        t = ProjTransform.linear(0, 1, 1, -c20 / c11, c11)
    else:
        root = sqrt_fraction(disc)
        if root is None:
            raise IrrationalNormalization(
                [c02, c11, c20],
                "asymptotic directions are irrational over Q")
        r1 = (-c11 + root) / (2 * c20)
        r2 = (-c11 - root) / (2 * c20)
        d = r2 - r1
        t = ProjTransform.linear(1 + r1 / d, -r1 / d, 1 / d, -1 / d, c20)
    g = apply_transform(t, f, f.order)
    return t, g, PointClass2("hyperbolic")


def random_stabilizer(seed: int, bound: int = 3) -> ProjTransform:
    """Deterministic-from-seed random group element with small entries."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    rng = random.Random(seed)

    def q() -> Fraction:
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

    for _ in range(1000):
        t = ProjTransform(q(), q(), q(), q(), q(), q(), q(), q(), q(), q())
        if t.is_valid():
            return t
    raise InternalError("could not sample a valid transform in 1000 attempts")
