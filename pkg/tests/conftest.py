import random
from fractions import Fraction

import pytest

from monge_strata import MongeJet, PlaneGermJet, TEMPLATES, normal_form_template


def random_monge(seed, order=5, density=0.5, bound=3):
    rng = random.Random(seed)
    coeffs = {}
    for i in range(order + 1):
        for j in range(order + 1 - i):
            if i + j >= 2 and rng.random() < density:
                coeffs[(i, j)] = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    return MongeJet.from_terms(coeffs, order)


def random_germ_change(rng, order, bound=2):
    """Random polynomial coordinate change with invertible linear part."""
    while True:
        a, b, c, d = (Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
                      for _ in range(4))
        if a * d - b * c != 0:
            break
    first = {(1, 0): a, (0, 1): b}
    second = {(1, 0): c, (0, 1): d}
    for comp in (first, second):
        for i in range(order + 1):
            for j in range(order + 1 - i):
                if i + j >= 2 and rng.random() < 0.35:
                    comp[(i, j)] = comp.get((i, j), Fraction(0)) + \
                        Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    return PlaneGermJet.from_terms(first, second, order)


def template_cases(signs_both_ways=True):
    """The 24 strata instantiated with alpha=2, beta=3, gamma=5, phis zero."""
    cases = []
    for name, tpl in TEMPLATES.items():
        base = {}
        if "alpha" in tpl.moduli:
            base["alpha"] = Fraction(2)
        if "beta" in tpl.moduli:
            base["beta"] = Fraction(3)
        if "gamma" in tpl.moduli and name.startswith("Π^p_{I"):
            base["gamma"] = Fraction(5)
        if "gamma" in tpl.moduli and name == "Π^f_1":
            base["gamma"] = Fraction(0)
        if tpl.sign_slot is not None and signs_both_ways:
            cases.append((name, dict(base, sign=1)))
            cases.append((name, dict(base, sign=-1)))
        elif tpl.sign_slot is not None:
            cases.append((name, dict(base, sign=1)))
        else:
            cases.append((name, dict(base)))
    return cases


@pytest.fixture
def templates():
    return [(name, moduli, normal_form_template(name, moduli))
            for name, moduli in template_cases()]
