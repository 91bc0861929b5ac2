import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monge_strata import (BivariateJet, TrivariateJet, compose_trunc,
                          mul_trunc, solve_curve, solve_implicit)
from monge_strata.errors import (DegenerateImplicit, NonvanishingConstantTerm)

F = Fraction


def jet(coeffs, order):
    return BivariateJet(coeffs, order)


def random_jet(rng, order, min_degree=0, density=0.5, bound=3):
    coeffs = {}
    for i in range(order + 1):
        for j in range(order + 1 - i):
            if i + j >= min_degree and rng.random() < density:
                coeffs[(i, j)] = F(rng.randint(-bound, bound), rng.randint(1, bound))
    return BivariateJet(coeffs, order)


class TestMulTrunc:
    def test_binomial_product(self):
        one_x = jet({(0, 0): 1, (1, 0): 1}, 2)
        one_y = jet({(0, 0): 1, (0, 1): 1}, 2)
        assert mul_trunc(one_x, one_y, 2) == jet({(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}, 2)

    def test_square(self):
        s = jet({(1, 0): 1, (0, 1): 1}, 2)
        assert mul_trunc(s, s, 2) == jet({(2, 0): 1, (1, 1): 2, (0, 2): 1}, 2)

    def test_degree_overflow_truncates_to_zero(self):
        assert mul_trunc(jet({(3, 0): 1}, 6), jet({(0, 3): 1}, 6), 4).is_zero()

    def test_ring_axioms_bulk(self):
        rng = random.Random(7)
        for trial in range(1000):
            order = rng.randint(2, 6)
            p = random_jet(rng, order, density=0.4, bound=2)
            q = random_jet(rng, order, density=0.4, bound=2)
            r = random_jet(rng, order, density=0.4, bound=2)
            assert mul_trunc(p, q, order) == mul_trunc(q, p, order)
            left = mul_trunc(mul_trunc(p, q, order), r, order)
            right = mul_trunc(p, mul_trunc(q, r, order), order)
            assert left == right
            dist = mul_trunc(p, q + r, order)
            assert dist == mul_trunc(p, q, order) + mul_trunc(p, r, order)

    def test_truncation_coherence(self):
        rng = random.Random(11)
        for trial in range(200):
            order = rng.randint(3, 6)
            kp = rng.randint(2, order)
            p = random_jet(rng, order)
            q = random_jet(rng, order)
            assert mul_trunc(p, q, order).truncate(kp) == \
                mul_trunc(p.truncate(kp), q.truncate(kp), kp)


class TestCompose:
    def test_linear_substitution(self):
        f = jet({(2, 0): 1}, 2)
        got = compose_trunc(f, jet({(1, 0): 1, (0, 1): 1}, 2), jet({(0, 1): 1}, 2), 2)
        assert got == jet({(2, 0): 1, (1, 1): 2, (0, 2): 1}, 2)

    def test_identity_substitution(self):
        rng = random.Random(3)
        for trial in range(25):
            f = random_jet(rng, 5)
            x = jet({(1, 0): 1}, 5)
            y = jet({(0, 1): 1}, 5)
            assert compose_trunc(f, x, y, 5) == f

    def test_cusp_of_gauss_square_structure(self):
        # f = (y + x^2/2)^2 pulled through (x, -x^2/2 - y) collapses to y^2
        f = jet({(0, 2): 1, (2, 1): 1, (4, 0): F(1, 4)}, 4)
        sx = jet({(1, 0): 1}, 4)
        sy = jet({(2, 0): F(-1, 2), (0, 1): -1}, 4)
        assert compose_trunc(f, sx, sy, 4) == jet({(0, 2): 1}, 4)

    def test_constant_term_rejected(self):
        f = jet({(2, 0): 1}, 3)
        bad = jet({(0, 0): 1, (1, 0): 1}, 3)
        good = jet({(0, 1): 1}, 3)
        with pytest.raises(NonvanishingConstantTerm):
            compose_trunc(f, bad, good, 3)

    def test_associativity(self):
        rng = random.Random(17)
        for trial in range(60):
            order = rng.randint(2, 5)
            f = random_jet(rng, order)
            s1 = random_jet(rng, order, min_degree=1)
            s2 = random_jet(rng, order, min_degree=1)
            t1 = random_jet(rng, order, min_degree=1)
            t2 = random_jet(rng, order, min_degree=1)
            inner_x = compose_trunc(s1, t1, t2, order)
            inner_y = compose_trunc(s2, t1, t2, order)
            lhs = compose_trunc(compose_trunc(f, s1, s2, order), t1, t2, order)
            rhs = compose_trunc(f, inner_x, inner_y, order)
            assert lhs == rhs


class TestSolveImplicit:
    def test_direct(self):
        F3 = TrivariateJet({(0, 0, 1): 1, (2, 0, 0): -1, (0, 2, 0): -1}, 2)
        assert solve_implicit(F3, 2) == jet({(2, 0): 1, (0, 2): 1}, 2)

    def test_geometric_series(self):
        F3 = TrivariateJet({(0, 0, 1): 1, (1, 0, 1): 1, (2, 0, 0): -1}, 3)
        assert solve_implicit(F3, 3) == jet({(2, 0): 1, (3, 0): -1}, 3)

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateImplicit):
            solve_implicit(TrivariateJet({(1, 0, 0): 1}, 2), 2)
        with pytest.raises(DegenerateImplicit):
            solve_implicit(TrivariateJet({(0, 0, 0): 1, (0, 0, 1): 1}, 2), 2)

    def test_residual_vanishes_in_bulk(self):
        # the operation asserts its own residual; this exercises it widely
        rng = random.Random(23)
        solved = 0
        for trial in range(1000):
            order = rng.randint(2, 6)
            coeffs = {(0, 0, 1): F(rng.randint(1, 3))}
            for i in range(order + 1):
                for j in range(order + 1 - i):
                    for l in range(order + 1 - i - j):
                        if 1 <= i + j + l and (i, j, l) != (0, 0, 1) and rng.random() < 0.25:
                            coeffs[(i, j, l)] = F(rng.randint(-2, 2), rng.randint(1, 2))
            coeffs.pop((0, 0, 0), None)
            G = TrivariateJet(coeffs, order)
            g = solve_implicit(G, order)
            assert g.coeffs.get((0, 0)) is None
            solved += 1
        assert solved == 1000


class TestSolveCurve:
    def test_parabola(self):
        G = jet({(0, 1): 1, (2, 0): 1}, 4)  # u + x^2 = 0
        assert solve_curve(G, 4) == jet({(2, 0): -1}, 4)

    def test_round_trip(self):
        rng = random.Random(5)
        for trial in range(100):
            order = rng.randint(2, 6)
            coeffs = {(0, 1): F(rng.randint(1, 3))}
            for i in range(order + 1):
                for j in range(order + 1 - i):
                    if i + j >= 1 and (i, j) != (0, 1) and rng.random() < 0.4:
                        coeffs[(i, j)] = F(rng.randint(-2, 2), rng.randint(1, 2))
            G = jet(coeffs, order)
            u = solve_curve(G, order)
            back = compose_trunc(G, jet({(1, 0): 1}, order), u, order)
            assert back.is_zero()


@given(st.integers(-50, 50), st.integers(1, 20), st.integers(-50, 50), st.integers(1, 20))
@settings(max_examples=80, deadline=None)
def test_scalar_multiplication_matches_fractions(a, b, c, d):
    p = jet({(1, 0): F(a, b)}, 2)
    assert (F(c, d) * p).coeff(1, 0) == F(a, b) * F(c, d)
