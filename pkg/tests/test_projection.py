import random
from fractions import Fraction

import pytest

from monge_strata import (BivariateJet, MongeJet, Viewpoint,
                          central_projection_jet, equisingularity_type,
                          normal_form_template, parabolic_invariants,
                          special_viewpoints)
from monge_strata.errors import (NoSpecialViewpoint, NotApplicable,
                                 NotParabolic, ViewpointOnSurface)
from monge_strata.germs import to_y_h

F = Fraction


def brute_force_finite_chart(f: MongeJet, a: F, k: int):
    """Independent oracle: expand (y/(x-a), f/(x-a)) as dense polynomials
    using nothing but dictionary bookkeeping."""
    inv = {}  # series of 1/(x - a) = -(1/a) sum (x/a)^d
    for d in range(k + 1):
        inv[d] = -F(1) / a ** (d + 1)
    first, second = {}, {}
    for d, c in inv.items():
        if d + 1 <= k:
            first[(d, 1)] = first.get((d, 1), F(0)) + c
    for (i, j), cf in f.jet.coeffs.items():
        for d, c in inv.items():
            if i + d + j <= k:
                key = (i + d, j)
                second[key] = second.get(key, F(0)) + cf * c
    first = {key: v for key, v in first.items() if v != 0}
    second = {key: v for key, v in second.items() if v != 0}
    return first, second


class TestCharts:
    def test_parallel_projection_prototype(self):
        f = MongeJet.from_terms({(1, 1): 1, (3, 0): 1}, 4)
        g = central_projection_jet(f, Viewpoint.infinite(1, 0, 0), 4)
        assert g.first == BivariateJet({(0, 1): 1}, 4)
        assert g.second == f.jet
        assert equisingularity_type(g).tag == "II_3"

    def test_parallel_projection_plain(self):
        f = MongeJet.from_terms({(0, 2): 1, (3, 0): 1}, 4)
        g = central_projection_jet(f, Viewpoint.infinite(1, 0, 0), 4)
        assert g.second == f.jet

    def test_finite_chart_against_brute_force(self):
        f = MongeJet.from_terms({(0, 2): 1, (3, 0): 1}, 4)
        g = central_projection_jet(f, Viewpoint.finite(1, 0, 0), 4)
        first, second = brute_force_finite_chart(f, F(1), 4)
        assert g.first.coeffs == first
        assert g.second.coeffs == second

    def test_finite_chart_brute_force_random(self):
        rng = random.Random(2)
        for trial in range(25):
            coeffs = {}
            for i in range(5):
                for j in range(5 - i):
                    if i + j >= 2 and rng.random() < 0.5:
                        coeffs[(i, j)] = F(rng.randint(-3, 3), rng.randint(1, 3))
            f = MongeJet.from_terms(coeffs, 4)
            a = F(rng.randint(1, 5), rng.randint(1, 3))
            g = central_projection_jet(f, Viewpoint.finite(a, 0, 0), 4)
            first, second = brute_force_finite_chart(f, a, 4)
            assert g.first.coeffs == first and g.second.coeffs == second

    def test_infinite_generic_direction(self):
        f = MongeJet.from_terms({(1, 1): 1, (3, 0): 1}, 4)
        g = central_projection_jet(f, Viewpoint.infinite(2, 3, 5), 4)
        assert g.first == BivariateJet({(0, 1): 1, (1, 0): F(-3, 2)}, 4)
        assert g.second == f.jet - F(5, 2) * BivariateJet({(1, 0): 1}, 4)

    def test_viewpoint_on_surface(self):
        f = MongeJet.from_terms({(0, 2): 1}, 3)
        with pytest.raises(ViewpointOnSurface):
            central_projection_jet(f, Viewpoint.finite(0, 0, 0), 3)

    def test_off_plane_viewpoint_is_regular(self):
        f = MongeJet.from_terms({(1, 1): 1, (3, 0): 1}, 4)
        g = central_projection_jet(f, Viewpoint.finite(0, 0, 1), 4)
        assert equisingularity_type(g).tag == "regular"

    def test_chart_consistency_infinite_vs_shifted(self):
        # parallel formula (y - vx, f - wx) agrees with the chart output
        rng = random.Random(4)
        for trial in range(20):
            coeffs = {}
            for i in range(6):
                for j in range(6 - i):
                    if i + j >= 2 and rng.random() < 0.4:
                        coeffs[(i, j)] = F(rng.randint(-2, 2), rng.randint(1, 2))
            f = MongeJet.from_terms(coeffs, 5)
            b, c = F(rng.randint(-3, 3)), F(rng.randint(-3, 3))
            g = central_projection_jet(f, Viewpoint.infinite(1, b, c), 5)
            x = BivariateJet({(1, 0): 1}, 5)
            y = BivariateJet({(0, 1): 1}, 5)
            assert g.first == y - b * x
            assert g.second == f.jet - c * x


class TestParabolicInvariants:
    def test_lips_chain_template(self):
        f = MongeJet.from_terms({(0, 2): 1, (3, 0): 1, (1, 3): 1, (4, 0): 2}, 6)
        inv = parabolic_invariants(f)
        assert inv.C == 0 and inv.D == 3
        assert inv.P == 1 and inv.Q == 0 and inv.R == 0

    def test_B_polynomial_alpha_family(self):
        for alpha in (F(1, 3), F(2), F(1, 4), F(0), F(1)):
            f = MongeJet.from_terms({(0, 2): 1, (2, 1): 1, (4, 0): alpha}, 4)
            inv = parabolic_invariants(f, want_pqr=False)
            assert inv.B == alpha - 4 * alpha ** 2
        # boundary set of B = alpha(1 - 4 alpha): {0, 1/4}
        zeros = [a for a in (F(0), F(1, 4), F(1, 3), F(2))
                 if (a - 4 * a * a) == 0]
        assert zeros == [F(0), F(1, 4)]

    def test_S_identity_with_table_sign_pairing(self):
        alpha, beta = F(2), F(3)
        for sgn in (1, -1):
            f = MongeJet.from_terms({(0, 2): 1, (4, 0): sgn, (3, 1): alpha,
                                     (2, 2): beta}, 4)
            inv = parabolic_invariants(f, want_pqr=False)
            assert inv.S == 3 * alpha ** 2 - sgn * 8 * beta
            pinned = MongeJet.from_terms({(0, 2): 1, (4, 0): sgn, (3, 1): alpha,
                                          (2, 2): sgn * F(3, 8) * alpha ** 2}, 4)
            assert parabolic_invariants(pinned, want_pqr=False).S == 0

    def test_not_parabolic_rejected(self):
        with pytest.raises(NotParabolic):
            parabolic_invariants(MongeJet.from_terms({(1, 1): 1, (3, 0): 1}, 4))

    def test_no_special_viewpoint(self):
        f = MongeJet.from_terms({(0, 2): 1, (4, 0): 1}, 4)
        with pytest.raises(NoSpecialViewpoint):
            parabolic_invariants(f, want_pqr=True)


class TestSpecialViewpoints:
    def test_lips_template_infinity(self):
        f = MongeJet.from_terms({(0, 2): 1, (3, 0): 1, (1, 3): 1, (4, 0): 2}, 6)
        svs = special_viewpoints(f)
        assert len(svs) == 1
        vp, et = svs[0]
        assert vp.at_infinity and vp.coords == (1, 0, 0)
        assert et.tag == "I_3"

    def test_gulls_no_special_viewpoint(self):
        f = MongeJet.from_terms({(0, 2): 1, (2, 1): 1, (4, 0): F(1, 4), (5, 0): 2}, 5)
        assert special_viewpoints(f) == []

    def test_gulls_finite_special_viewpoint(self):
        f = MongeJet.from_terms({(0, 2): 1, (2, 1): 1, (4, 0): F(1, 3), (5, 0): 1}, 7)
        svs = special_viewpoints(f)
        assert len(svs) == 1
        vp, et = svs[0]
        assert not vp.at_infinity and vp.coords == (F(1, 9), 0, 0)
        assert et.tag == "III_3"

    def test_quartic_chain_constant_type(self):
        f = MongeJet.from_terms({(0, 2): 1, (2, 1): 1, (5, 0): 1}, 5)
        assert special_viewpoints(f) == []

    def test_flat_contact_chain(self):
        f = MongeJet.from_terms({(0, 2): 1, (4, 0): 1, (3, 1): 2, (2, 2): 3}, 6)
        svs = special_viewpoints(f)
        assert len(svs) == 1 and svs[0][0].at_infinity
        assert svs[0][1].tag == "VI"

    def test_elliptic_rejected(self):
        f = MongeJet.from_terms({(2, 0): 1, (0, 2): 1}, 3)
        with pytest.raises(NotApplicable):
            special_viewpoints(f)

    def test_hyperbolic_empty(self):
        f = MongeJet.from_terms({(1, 1): 1, (3, 0): 1, (0, 3): 1}, 4)
        assert special_viewpoints(f) == []

    def test_flat_umbilic_minus_sweep(self):
        # xy^2 - x^3: the exceptional tangent lines carry gulls-type germs
        f = MongeJet.from_terms({(1, 2): 1, (3, 0): -1, (3, 1): 2, (0, 4): 3}, 6)
        svs = special_viewpoints(f)
        dirs = {vp.coords for vp, et in svs if vp.at_infinity}
        assert (1, 1, 0) in dirs and (1, -1, 0) in dirs
        for vp, et in svs:
            if vp.at_infinity and vp.coords in ((1, 1, 0), (1, -1, 0)):
                assert et.tag == "III_2"

    def test_flat_umbilic_double_line_sweep(self):
        # xy^2 + x^4 + y^4 + alpha x^3 y: the line b = 0 carries V_1
        f = MongeJet.from_terms({(1, 2): 1, (4, 0): 1, (0, 4): 1, (3, 1): 2}, 6)
        svs = special_viewpoints(f)
        v1_lines = [vp for vp, et in svs if et.tag == "V_1"]
        assert any(vp.at_infinity and vp.coords == (1, 0, 0) for vp in v1_lines)


class TestSpecialViewpointProperty:
    def test_delta_vanishes_exactly_at_special_position(self):
        rng = random.Random(5)
        checked = 0
        while checked < 40:
            co = {(0, 2): F(1), (3, 0): F(rng.randint(1, 3), rng.randint(1, 3))}
            for slot in ((2, 1), (1, 2), (0, 3), (4, 0), (3, 1), (2, 2), (1, 3),
                         (0, 4), (5, 0), (4, 1), (3, 2), (2, 3), (1, 4), (0, 5)):
                if rng.random() < 0.6:
                    co[slot] = F(rng.randint(-3, 3), rng.randint(1, 3))
            f = MongeJet.from_terms(co, 6)
            inv = parabolic_invariants(f, want_pqr=False)
            if inv.C == 0:
                continue
            a_star = -inv.D / inv.C
            if a_star == 0:
                continue
            germ = central_projection_jet(f, Viewpoint.finite(a_star, 0, 0), 6)
            nz = to_y_h(germ)
            T = 3 * nz.a(3, 0) * nz.a(1, 2) - nz.a(2, 1) ** 2
            assert T == 0
            a_other = a_star + 1 if a_star != -1 else a_star + 2
            germ2 = central_projection_jet(f, Viewpoint.finite(a_other, 0, 0), 6)
            nz2 = to_y_h(germ2)
            T2 = 3 * nz2.a(3, 0) * nz2.a(1, 2) - nz2.a(2, 1) ** 2
            assert T2 != 0
            checked += 1
