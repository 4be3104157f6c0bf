"""Torsion seminorms over skew Laurent polynomial rings.

Exact arithmetic in twisted Laurent rings K[t^{+-1}] and their skew
fraction fields, Dieudonne determinants, Newton polytope seminorms and
the Fox-calculus torsion of deficiency-one group presentations.
"""

from .dieudonne import ClearedFraction, DetResult, clear_denominators, dieudonne_det, phi_det
from .fox import (CompatibleRep, FreeWord, Presentation, alexander_matrix, delta_bar,
                  fox_derivative, presentation_norm, known_presentation, parse_word, torsion)
from .norms import (NEG_INF, LatticePolytope, NormBall, deg_phi, matrix_seminorm_from_deg,
                    minkowski, newton, norm_ball, seminorm, torsion_seminorm)
from .ore import Tower, deg_frac, gcrd, gcrd_lclm, lclm, left_divide, right_divide, standard_tower
from .scalars import ActionData, BaseField
from .skew_laurent import SkewLaurentPoly, SkewLaurentRing, gamma_phi, gamma_phi_inverse

__version__ = "0.1.0"
