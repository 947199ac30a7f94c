"""Exact computations with ideal pairs ``J ⊆ I`` in polynomial rings: Rees and
symmetric algebras, the Aluffi algebra, associated graded forms, and checks of
the ATF property ``J ∩ I^n = J I^(n-1)``."""

from .atf import (Certificate, atf_exact, atf_truncated, colon_criterion, nested_sufficiency,
                  perturbation_check, regular_sequence, residual_criterion, strongly_atf,
                  sum_criterion, transfer_criterion, verify_witness)
from .blowup import (INFINITY, UNDECIDED, PresentedAlgebra, Verdict, aluffi_presentation,
                     associated_graded_presentation, extended_rees_presentation, form_ideal,
                     initial_form, nu_valuation, quotient_rees_presentation, rees_presentation,
                     standard_base_test, sym_presentation, vv_component)
from .cache import GroebnerStore, using_store
from .errors import (AluffiError, BudgetExceeded, DegreeCapExceeded, GeneratorCapExceeded,
                     ParseError, PreconditionError, RingError, RingMismatchError)
from .families import (FamilySpec, arrangement_gradient, generic_matrix_minors, jacobian_ideal,
                       monomial_curve, points_ideal, squarefree_veronese, toric_kernel)
from .groebner import budget
from .ideal import (Ideal, dimension_height, eliminate, ideal_equal, ideal_intersect,
                    ideal_membership, ideal_power, ideal_product, ideal_quotient, ideal_subset,
                    ideal_sum, ring_map_kernel, saturate)
from .modules import Submodule, lift, syzygy_module
from .parsing import parse_polynomial, parse_polynomials
from .ring import MonomialOrder, Polynomial, RingSpec, polynomial_ring

__version__ = "0.1.0"
