"""Exact classification of surface jets in projective 3-space.

The library stratifies Monge forms z = f(x, y) by the singularity pattern of
their central projections, reduces jets to the stratum normal forms with the
full projective transform recorded, computes the projection germs and their
special viewpoints, and derives the asymptotic binary differential equation
with its parabolic and flecnodal curve geometry.  All arithmetic is exact
over the rationals.
"""

__version__ = "0.1.0"

from .bde import (BDEJet, BdeLocalType, CurveJet, FlecnodalResult,
                  asymptotic_bde, bde_bifurcation_type, flecnodal_branches,
                  folded_singularity, parabolic_curve, pullback)
from .classify import (NormalFormResult, StratumLabel, TEMPLATES, classify,
                       cubic_discriminant, normal_form_template,
                       reduce_to_normal_form)
from .germs import (EquiType, PlaneGermJet, analyze_germ, compose_germ,
                    equisingularity_type, identity_germ, invert_germ,
                    prenormalize_germ)
from .jets import (BivariateJet, MongeJet, TrivariateJet, compose_trunc,
                   mul_trunc, solve_curve, solve_implicit)
from .projection import (ParabolicInvariants, Viewpoint,
                         central_projection_jet, parabolic_invariants,
                         special_viewpoints)
from .transform import (PointClass2, ProjTransform, apply_transform, compose,
                        prenormalize_2jet, random_stabilizer)

__all__ = [name for name in dir() if not name.startswith("_")]
