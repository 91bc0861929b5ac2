import random
from fractions import Fraction

import pytest

from monge_strata import (MongeJet, ProjTransform, apply_transform, compose,
                          prenormalize_2jet, random_stabilizer)
from monge_strata.errors import InvalidTransform, OrderTooLow

from conftest import random_monge

F = Fraction


class TestApplyTransform:
    def test_identity(self):
        f = random_monge(1, order=5)
        assert apply_transform(ProjTransform.identity(), f, 5) == f

    def test_quasihomogeneous_fixed_point(self):
        f = MongeJet.from_terms({(0, 2): 1, (3, 0): 1}, 4)
        t = ProjTransform.diagonal(4, 8, 64)  # (x,y,z) -> (t^2 x, t^3 y, t^6 z), t = 2
        assert apply_transform(t, f, 4) == f

    def test_published_parabolic_fourjet_transform(self):
        # q1 = x - (1/3) c22 z, q2 = y + (1/2) c31 z, q3 = z,
        # p = 1 + c31 y + (c04 + c31^2/4) z  kills the c22, c31, c04 slots
        co = {(0, 2): 1, (3, 0): 1, (4, 0): F(2, 3), (3, 1): F(5, 7),
              (2, 2): F(-3, 2), (1, 3): F(4, 5), (0, 4): F(7, 3)}
        f = MongeJet.from_terms(co, 4)
        c22, c31, c04 = co[(2, 2)], co[(3, 1)], co[(0, 4)]
        t = ProjTransform(1, 0, -c22 / 3, 0, 1, c31 / 2, 1,
                          0, c31, c04 + c31 * c31 / 4)
        g = apply_transform(t, f, 4)
        for slot in ((2, 1), (1, 2), (2, 2), (3, 1), (0, 4)):
            assert g.coeff(*slot) == 0
        assert g.coeff(4, 0) == co[(4, 0)]
        assert g.coeff(1, 3) == co[(1, 3)]

    def test_invalid_transform_rejected(self):
        t = ProjTransform(1, 0, 0, 0, 1, 0, 0, 0, 0, 0)  # c = 0
        with pytest.raises(InvalidTransform):
            apply_transform(t, random_monge(2), 4)
        t = ProjTransform(1, 2, 0, 2, 4, 0, 1, 0, 0, 0)  # det = 0
        with pytest.raises(InvalidTransform):
            apply_transform(t, random_monge(2), 4)

    def test_order_too_low(self):
        with pytest.raises(OrderTooLow):
            apply_transform(ProjTransform.identity(), random_monge(3, order=3), 5)

    def test_composition_law(self):
        for s in range(40):
            t1 = random_stabilizer(2 * s, 2)
            t2 = random_stabilizer(2 * s + 1, 2)
            f = random_monge(s, order=5)
            lhs = apply_transform(t2, apply_transform(t1, f, 5), 5)
            rhs = apply_transform(compose(t1, t2), f, 5)
            assert lhs == rhs

    def test_inverse_round_trip(self):
        for s in range(100):
            t = random_stabilizer(s, 2)
            f = random_monge(1000 + s, order=5)
            assert apply_transform(t.inverse(), apply_transform(t, f, 5), 5) == f

    def test_order_independence(self):
        for s in range(20):
            t = random_stabilizer(s, 2)
            f = random_monge(s, order=6)
            full = apply_transform(t, f, 6)
            assert full.truncate(4) == apply_transform(t, f.truncate(4), 4)


class TestPrenormalize2Jet:
    def test_elliptic_identity(self):
        f = MongeJet.from_terms({(2, 0): 1, (0, 2): 1}, 3)
        t, g, kind = prenormalize_2jet(f)
        assert kind.kind == "elliptic"
        assert g.coeff(2, 0) == 1 and g.coeff(0, 2) == 1 and g.coeff(1, 1) == 0

    def test_hyperbolic_from_signature(self):
        f = MongeJet.from_terms({(2, 0): 1, (0, 2): -1, (3, 0): 1}, 3)
        t, g, kind = prenormalize_2jet(f)
        assert kind.kind == "hyperbolic"
        assert g.coeff(1, 1) == 1 and g.coeff(2, 0) == 0 and g.coeff(0, 2) == 0

    def test_parabolic_rescaled(self):
        f = MongeJet.from_terms({(0, 2): 2, (3, 0): 1}, 3)
        t, g, kind = prenormalize_2jet(f)
        assert kind.kind == "parabolic"
        assert g.coeff(0, 2) == 1 and g.coeff(2, 0) == 0 and g.coeff(1, 1) == 0

    def test_flat_umbilic(self):
        f = MongeJet.from_terms({(3, 0): 1, (1, 2): 1}, 3)
        t, g, kind = prenormalize_2jet(f)
        assert kind.kind == "flat-umbilic"
        assert t == ProjTransform.identity()

    def test_kind_is_invariant(self):
        for s in range(60):
            f = random_monge(s, order=4)
            if all(f.coeff(*sl) == 0 for sl in ((2, 0), (1, 1), (0, 2))):
                continue
            try:
                _t, _g, kind = prenormalize_2jet(f)
            except Exception:
                continue
            t = random_stabilizer(500 + s, 2)
            g2 = apply_transform(t, f, f.order)
            _t2, _gg, kind2 = prenormalize_2jet(g2)
            assert kind2.kind == kind.kind


class TestRandomStabilizer:
    def test_deterministic(self):
        assert random_stabilizer(0) == random_stabilizer(0)
        assert random_stabilizer(1) != random_stabilizer(2)

    def test_always_valid(self):
        for s in range(200):
            assert random_stabilizer(s, 3).is_valid()
