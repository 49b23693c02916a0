"""Exact cobar models and Adams--Hilton models of polyhedral products.

The package builds free dg algebras over the integers from simplicial
complexes, computes their degree-truncated homology and writes down explicit
cycles for Hurewicz images of higher Whitehead products.
"""

__version__ = "0.1.0"

from .algebra import GradedElement, Generator, bracket, koszul_sign, shuffles
from .cobar import (
    CoalgebraPresentation,
    DgAlgebra,
    DgaMap,
    Multiset,
    ah_cpn,
    apply_diff,
    check_d_squared,
    cobar_dj,
    cobar_of_coalgebra,
    cobar_spheres,
    face_coalgebra,
    homology_coalgebra,
    subalgebra_membership,
)
from .complexes import (
    SimplicialComplex,
    boundary_simplex,
    complexes_of_bracket,
    contains_subcomplex,
    full_simplex,
    parse_bracket,
    substitution,
)
from .homology import basis_in_degree, boundary_matrix, class_is_zero, homology, smith_normal_form
from .whitehead import (
    WhiteheadChain,
    ah_map_g,
    ah_map_g_images,
    attaching_cycle,
    first_order_hurewicz_cycle,
    hurewicz_class_report,
    iterated_example_chain,
)

__all__ = [
    "CoalgebraPresentation",
    "DgAlgebra",
    "DgaMap",
    "GradedElement",
    "Generator",
    "Multiset",
    "SimplicialComplex",
    "WhiteheadChain",
    "ah_cpn",
    "ah_map_g",
    "ah_map_g_images",
    "apply_diff",
    "attaching_cycle",
    "basis_in_degree",
    "boundary_matrix",
    "boundary_simplex",
    "bracket",
    "check_d_squared",
    "class_is_zero",
    "cobar_dj",
    "cobar_of_coalgebra",
    "cobar_spheres",
    "complexes_of_bracket",
    "contains_subcomplex",
    "face_coalgebra",
    "first_order_hurewicz_cycle",
    "full_simplex",
    "homology",
    "homology_coalgebra",
    "hurewicz_class_report",
    "iterated_example_chain",
    "koszul_sign",
    "parse_bracket",
    "shuffles",
    "smith_normal_form",
    "subalgebra_membership",
    "substitution",
]
