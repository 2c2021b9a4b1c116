"""Spin Calogero-Moser systems for the classical simple Lie algebras.

Rational, trigonometric and elliptic Lax operators, their commuting integrals
from the primitive invariant polynomials, and numerical checks of Poisson
commutation and functional independence.
"""

__version__ = "0.1.0"

from .errors import (CapabilityError, ConditioningError, ConfigurationError, ConsistencyError,
                     DomainError, PoleProximityError, SamplingError)
from .rootdata import ExponentData, RootSystem, build_root_system, exponent_data
from .liealg import AlgebraElement, AlgebraRealization, realize
from .invariants import PrimitiveInvariant, F_coefficients, pairing, primitive_invariants
from .weierstrass import Lattice, sigma, wp, zeta
from .lax import (IntegralTable, LaxFamily, PhasePoint, extract_integrals, hamiltonian,
                  lax_hamiltonian, lax_matrix, r_contraction, sample_phase_point)
from .poisson import (CommutationReport, FlowResult, ObservableFunction, commutation_report, flow,
                      poisson_bracket)
from .independence import (DerivativeBlocks, OrderedIndexing, a_matrix, build_D, jacobian_rank,
                           liouville_count, remainder_degree_check, verify_det_formula)

__all__ = [
    "AlgebraElement", "AlgebraRealization", "CapabilityError", "CommutationReport",
    "ConditioningError", "ConfigurationError", "ConsistencyError", "DerivativeBlocks",
    "DomainError", "ExponentData", "F_coefficients", "FlowResult", "IntegralTable", "Lattice",
    "LaxFamily", "ObservableFunction", "OrderedIndexing", "PhasePoint", "PoleProximityError",
    "PrimitiveInvariant", "RootSystem", "SamplingError", "a_matrix", "build_D",
    "build_root_system", "commutation_report", "exponent_data", "extract_integrals", "flow",
    "hamiltonian", "jacobian_rank", "lax_hamiltonian", "lax_matrix", "liouville_count",
    "pairing", "poisson_bracket", "primitive_invariants", "r_contraction", "realize",
    "remainder_degree_check", "sample_phase_point", "sigma", "verify_det_formula", "wp", "zeta",
]
