"""Chains and cochains on overlapping cubical lattices."""

from .algebra import LatticeAlgebra, NORMALIZATIONS, random_element, to_basis_algebra
from .element import CHAIN, COCHAIN, LatticeElement
from .homology import homology_rank, homology_rank_degree0
from .operators import (
    boundary,
    boundary_u,
    coboundary,
    coboundary_u,
    divided_difference,
    du_wedge,
    idbar,
    interior_product,
    pairing,
    shift,
    star,
    star_bar,
    translate,
    wedge,
)
from .sampling import PolynomialField, random_field, sample_polynomial
from .spec import PERIODIC, WINDOW, Cell, LatticeSpec, WindowOverflowError

__all__ = [
    "CHAIN", "COCHAIN", "PERIODIC", "WINDOW", "Cell", "LatticeAlgebra", "LatticeElement", "LatticeSpec",
    "NORMALIZATIONS", "PolynomialField", "WindowOverflowError", "boundary", "boundary_u", "coboundary",
    "coboundary_u", "divided_difference", "du_wedge", "homology_rank", "homology_rank_degree0", "idbar",
    "interior_product", "pairing", "random_element", "random_field", "sample_polynomial", "shift", "star",
    "star_bar", "to_basis_algebra", "translate", "wedge",
]
