from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monge_strata.fields import (AlgField, RatFunc, best_rational_within,
                                 isolate_real_roots, poly_norm, rational_roots,
                                 simplest_between)

F = Fraction


class TestRationalRoots:
    def test_linear_and_factored(self):
        assert rational_roots([F(-6), F(1)]) == [F(6)]
        # (t - 1/2)(t + 3)(t - 2) = t^3 + 1/2 t^2 - 13/2 t + 3
        assert rational_roots([F(3), F(-13, 2), F(1, 2), F(1)]) == [F(-3), F(1, 2), F(2)]

    def test_irrational_skipped(self):
        assert rational_roots([F(-2), F(0), F(1)]) == []   # t^2 = 2
        assert rational_roots([F(-2), F(0), F(0), F(1)]) == []  # t^3 = 2

    def test_multiple_roots(self):
        # (t - 1)^2 (t + 2)
        assert rational_roots([F(2), F(-3), F(0), F(1)]) == [F(-2), F(1)]

    def test_zero_root(self):
        assert rational_roots([F(0), F(0), F(1)]) == [F(0)]

    def test_big_coefficients(self):
        # root 355/113 among irrational companions
        p = poly_norm([F(-355 * 7, 113), F(7) - F(355, 113), F(1)])
        # (t - 355/113)(t + 7)
        assert F(355, 113) in rational_roots(p)


class TestSimplestBetween:
    def test_includes_integers(self):
        assert simplest_between(F(3, 2), F(5, 2)) == 2
        assert simplest_between(F(-1, 3), F(1, 7)) == 0

    def test_half(self):
        assert simplest_between(F(4, 10), F(6, 10)) == F(1, 2)

    @given(st.fractions(min_value=-100, max_value=100),
           st.fractions(min_value=0, max_value=10).filter(lambda q: q > 0))
    @settings(max_examples=100, deadline=None)
    def test_within_interval(self, x, w):
        m = simplest_between(x, x + w)
        assert x <= m <= x + w


def test_best_rational_within():
    assert best_rational_within(F(314159, 100000), F(1, 100)) == F(22, 7)
    assert best_rational_within(F(1, 2), F(0)) == F(1, 2)


class TestRatFunc:
    def test_field_axioms(self):
        t = RatFunc.var()
        a = (t + 1) / (t - 2)
        b = (2 * t * t - 3) / (t + 5)
        assert a * b / b == a
        assert a + b - b == a
        assert (a - a) == 0
        assert a * 0 == RatFunc(0)

    def test_cancellation(self):
        t = RatFunc.var()
        r = (t * t - 1) / (t - 1)
        assert r == t + 1

    def test_subs(self):
        t = RatFunc.var()
        r = (t ** 2 + 1) / (t - 3)
        assert r.subs(F(5)) == F(26, 2)

    def test_zero_test(self):
        t = RatFunc.var()
        assert not (t - t)
        assert t != 0


class TestAlgField:
    def test_sqrt2(self):
        K = AlgField([F(-2), F(0), F(1)], 1, 2)
        r = K.gen()
        assert r * r == 2
        assert (1 / r) * r == 1
        assert r.sign() > 0
        assert (r - 1).sign() > 0 and (r - 2).sign() < 0

    def test_cubic(self):
        # real root of t^3 - t - 1 (the plastic number, ~1.3247)
        K = AlgField([F(-1), F(-1), F(0), F(1)], 1, 2)
        r = K.gen()
        assert r ** 3 == r + 1
        inv = 1 / (r ** 2 - 1)
        assert inv * (r ** 2 - 1) == 1
        assert (r - F(4, 3)).sign() < 0 and (r - F(5, 4)).sign() > 0

    def test_reducible_rejected(self):
        with pytest.raises(ValueError):
            AlgField([F(-1), F(0), F(1)], 0, 2)  # t^2 - 1


def test_isolation_counts_roots():
    # (t^2 - 2)(t - 3) has three real roots
    p = poly_norm([F(6), F(-2), F(-3), F(1)])
    assert len(isolate_real_roots(p)) == 3
