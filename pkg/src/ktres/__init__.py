"""Exact Koszul and Koszul-Tate resolutions with homology certified slice by slice."""
from .errors import (
    CapExceeded,
    ContractViolation,
    InconsistentInput,
    JetTruncationError,
    KtresError,
    ParseError,
    StructuralError,
)
from .poly import Poly, poly_add, poly_mul
from .groebner import Ideal, QuotientRing, buchberger, ideal_member, normal_form
from .gca import Derivation, GcaAlgebra, GcaElement, GeneratorSpec, derivation_apply, derivation_square_witness, gca_mul
from .homology import BettiWindow, betti, betti_window, boundary_preimage, cycle_representatives, slice_basis
from .resolution import (
    DgaMorphism,
    ResolutionState,
    is_regular_sequence,
    koszul_complex,
    relation_is_trivial,
    relation_is_weakly_trivial,
    sullivan_extend,
    sullivan_morphism,
    tate_resolve,
    tate_step,
    tate_two_step,
    verify_sullivan_type,
)
from .jets import (
    JetPolynomial,
    JetSpace,
    JetVariable,
    euler_lagrange,
    linearize,
    prolong_evolutionary,
    total_derivative,
)
from .operators import TotalDiffOperator, op_apply, op_compose
from .gauge import GaugeKtComplex, GaugeTheory, build_gauge_kt, check_noether, kt_h0_report, verify_kt_dlinearity
from .compat import CompatComplexSpec, CompatKtComplex, as_resolution_state, build_compat_kt, validate_compat
from .demo import jet_functor_demo
from .kernels import BACKEND

__version__ = "0.1.0"
