"""Exact rational polynomial arithmetic and Buchberger's algorithm."""

from .ansatz import (
    ANSATZ_UNKNOWNS,
    AnsatzSystem,
    basis_element_membership,
    build_ansatz_system,
    degenerate_family_check,
    denominator_identities,
    displayed_basis_element,
    general_solution_values,
    verify_general_solution,
)
from .engine import (
    DEFAULT_OP_BUDGET,
    DEFAULT_PAIR_BUDGET,
    buchberger,
    in_ideal,
    kernel_name,
    reduce,
    s_polynomial,
    verify_groebner,
)
from .poly import GREVLEX, LEX, GaussianRational, I_UNIT, MultiPoly, PolyRing

__all__ = [
    "ANSATZ_UNKNOWNS", "AnsatzSystem", "basis_element_membership",
    "build_ansatz_system", "degenerate_family_check",
    "denominator_identities", "displayed_basis_element",
    "general_solution_values", "verify_general_solution",
    "DEFAULT_OP_BUDGET", "DEFAULT_PAIR_BUDGET", "buchberger", "in_ideal",
    "kernel_name", "reduce", "s_polynomial", "verify_groebner",
    "GREVLEX", "LEX", "GaussianRational", "I_UNIT", "MultiPoly", "PolyRing",
]
