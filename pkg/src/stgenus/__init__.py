"""S-T genus numbers of quadratic fields via governing-field symbol matrices."""

from .arith import INF, TWO, Place, hilbert_add, is_prime, kronecker, legendre_add, splitting_type
from .genus import GenusReport, ProblemInstance, build_matrix_caserule, genus_number, ramification_set
from .governing import PlaceSets, governing_basis, wt_subgroup
from .oracle import build_matrix_hilbert, genus_via_formula, hilbert_bruteforce

__version__ = "0.1.0"
