import random
from fractions import Fraction

import pytest

from monge_strata import (PlaneGermJet, analyze_germ, compose_germ,
                          equisingularity_type, identity_germ, invert_germ,
                          prenormalize_germ)
from monge_strata.errors import CorankTwo, OrderTooLow

from conftest import random_germ_change

F = Fraction


def germ(second, order, first=None):
    return PlaneGermJet.from_terms(first or {(0, 1): 1}, second, order)


TABLE4_MODELS = [
    ("fold", germ({(2, 0): 1}, 3)),
    ("I_2^+", germ({(3, 0): 1, (1, 2): 1}, 4)),
    ("I_2^-", germ({(3, 0): 1, (1, 2): -1}, 4)),
    ("I_3", germ({(3, 0): 1, (1, 3): 1}, 5)),
    ("I_4^+", germ({(3, 0): 1, (1, 4): 1}, 6)),
    ("I_4^-", germ({(3, 0): 1, (1, 4): -1}, 6)),
    ("I_5", germ({(3, 0): 1, (1, 5): 1}, 7)),
    ("II_3", germ({(1, 1): 1, (3, 0): 1}, 4)),
    ("II_4", germ({(1, 1): 1, (4, 0): 1}, 5)),
    ("II_5", germ({(1, 1): 1, (5, 0): 1}, 6)),
    ("II_6", germ({(1, 1): 1, (6, 0): 1}, 7)),
    ("II_7", germ({(1, 1): 1, (7, 0): 1}, 8)),
    ("III_2", germ({(2, 1): 1, (4, 0): 1, (5, 0): 1}, 5)),
    ("III_3", germ({(2, 1): 1, (4, 0): 1, (7, 0): 1}, 7)),
    ("IV_1", germ({(2, 1): 1, (5, 0): 1}, 5)),
    ("IV_2", germ({(2, 1): 1, (6, 0): 1}, 6)),
    ("V_1", germ({(1, 2): 1, (4, 0): 1}, 4)),
    ("V_2", germ({(1, 2): 1, (3, 1): 2}, 4)),
    ("VI", germ({(4, 0): 1, (2, 2): 2, (1, 3): 3}, 4)),
    ("VI_1", germ({(4, 0): 1, (1, 3): 2}, 4)),
    ("VI_2", germ({(2, 2): 2, (1, 3): 3}, 4)),
]


class TestGermAlgebra:
    def test_compose_and_invert(self):
        rng = random.Random(0)
        for trial in range(30):
            g = random_germ_change(rng, 5)
            gi = invert_germ(g)
            assert compose_germ(g, gi) == identity_germ(5)
            assert compose_germ(gi, g) == identity_germ(5)

    def test_corank_two_rejected(self):
        with pytest.raises(CorankTwo):
            invert_germ(germ({(2, 0): 1}, 3, first={(0, 2): 1}))


class TestRecognition:
    @pytest.mark.parametrize("tag,model", TABLE4_MODELS, ids=[t for t, _ in TABLE4_MODELS])
    def test_models_recognized(self, tag, model):
        assert equisingularity_type(model).tag == tag

    def test_regular_germ(self):
        et = equisingularity_type(germ({(1, 0): 1, (0, 2): 1}, 3))
        assert et.tag == "regular"

    def test_fold_example(self):
        assert equisingularity_type(germ({(2, 0): 1}, 3)).tag == "fold"

    def test_gulls_chain_example(self):
        assert equisingularity_type(germ({(2, 1): 1, (5, 0): 1}, 5)).tag == "IV_1"

    def test_beaks_example(self):
        et = equisingularity_type(germ({(3, 0): 1, (1, 2): -1}, 4))
        assert et.tag == "I_2^-" and et.p == 3

    def test_table_data(self):
        expected = {"fold": (2, 0), "I_3": (4, 4), "II_5": (5, 4), "III_2": (5, 4),
                    "III_3": (7, 5), "IV_1": (5, 5), "IV_2": (6, 6), "V_1": (4, 5),
                    "V_2": (4, 6), "VI": (4, 6)}
        for tag, model in TABLE4_MODELS:
            if tag in expected:
                et = equisingularity_type(model)
                assert (et.p, et.codim) == expected[tag], tag

    @pytest.mark.parametrize("tag,model", TABLE4_MODELS, ids=[t for t, _ in TABLE4_MODELS])
    def test_invariance_under_coordinate_changes(self, tag, model):
        rng = random.Random(hash(tag) & 0xFFFF)
        for trial in range(6):
            sigma = random_germ_change(rng, model.order)
            tau = random_germ_change(rng, model.order)
            moved = compose_germ(tau, compose_germ(model, sigma))
            assert equisingularity_type(moved).tag == tag

    def test_order_too_low_on_undecided_chain(self):
        # x y + nothing else up to order 4 could be II_5 or worse
        with pytest.raises(OrderTooLow):
            equisingularity_type(germ({(1, 1): 1}, 4))


class TestPrenormalization:
    def test_target_change_removes_pure_y(self):
        # (y, y^2 + x^3) ~ (y, x^3)
        g = prenormalize_germ(germ({(0, 2): 1, (3, 0): 1}, 4))
        assert g.second == PlaneGermJet.from_terms({(0, 1): 1}, {(3, 0): 1}, 4).second

    def test_cusp_prototype_unchanged(self):
        g = prenormalize_germ(germ({(1, 1): 1, (3, 0): 1}, 4))
        assert g.second.coeff(1, 1) != 0 and g.second.coeff(0, 2) == 0

    def test_fold_from_mixed_presentation(self):
        # (y + x^2, x^2) is a fold
        g = PlaneGermJet.from_terms({(0, 1): 1, (2, 0): 1}, {(2, 0): 1}, 3)
        assert equisingularity_type(g).tag == "fold"

    def test_changes_replay_to_normal_form(self):
        rng = random.Random(9)
        for tag, model in TABLE4_MODELS[:10]:
            sigma = random_germ_change(rng, model.order)
            tau = random_germ_change(rng, model.order)
            moved = compose_germ(tau, compose_germ(model, sigma))
            an = analyze_germ(moved)
            replay = compose_germ(an.left, compose_germ(moved, an.right))
            assert replay.first == an.normalized.first
            assert replay.second == an.normalized.second

    def test_i_chain_reduced_to_x3_plus_xP(self):
        g = prenormalize_germ(germ({(3, 0): 1, (2, 2): F(1, 2), (1, 3): 2,
                                    (4, 0): 3, (0, 4): 1}, 5))
        h = g.second
        for (i, j), c in h.coeffs.items():
            assert (i, j) == (3, 0) or i == 1, (i, j)
