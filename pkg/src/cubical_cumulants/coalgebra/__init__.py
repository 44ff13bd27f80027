"""Symmetric coalgebra machinery: cumulant bijection, coderivations and Taylor brackets."""

from .algebra import GradedBasisAlgebra, LinearMap, Vector, check_algebra_axioms, exterior_algebra, random_dg_algebra
from .symmetric import SymElement, conjugated_coderivation, reduced_coproduct, tau, tau_inv
from .taylor import taylor_bracket_conjugation, taylor_bracket_direct, taylor_bracket_recursive

__all__ = [
    "GradedBasisAlgebra", "LinearMap", "SymElement", "Vector", "check_algebra_axioms", "conjugated_coderivation",
    "exterior_algebra", "random_dg_algebra", "reduced_coproduct", "tau", "tau_inv", "taylor_bracket_conjugation",
    "taylor_bracket_direct", "taylor_bracket_recursive",
]
