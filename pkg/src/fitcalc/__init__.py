"""Fitting ideals of pushforwards of finite map germs (C^n,0) -> (C^{n+1},0)."""

from .errors import (BudgetExceeded, ComputationError, FitcalcError, NotFiniteError, ParseError,
                     PresentationError, RingMismatchError)
from .germ import FitcalcWarning, MapGerm
from .groebner import GroebnerBasis, buchberger, eliminate, membership, normal_form
from .ideals import (Ideal, ideal_equal, ideal_intersect, ideal_power, ideal_product,
                     ideal_quotient, ideal_sum, is_nonzerodivisor_mod, preimage, specialize)
from .matrices import (PolyMatrix, determinant, hypersurface_jacobian, jacobian_matrix,
                       minors_ideal, ramification_ideal)
from .pipeline import (FittingReport, consistency_report, divided_difference_matrix,
                       double_point_ideal, fitting1_from_unfolding, fitting1_grauert_remmert,
                       fitting1_theorem1, fitting_tower_theorem2, image_ideal)
from .polyring import (INHOMOGENEOUS, PolyRing, Polynomial, RingMap, apply_map, derivative,
                       poly_arith, weighted_degree)
from .presentation import (MonomialBasis, Presentation, fitting_from_presentation,
                           presentation_matrix, qalgebra_basis)

__version__ = "0.1.0"
