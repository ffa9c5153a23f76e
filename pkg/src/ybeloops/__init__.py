"""Set-theoretic Yang-Baxter solutions, Bruck loops and their classification."""

from .braided import BraidedSet, is_dihedral, is_solution, is_triality
from .morphisms import Permutation, automorphism_group, lbds_isomorphic, n_ci
from .tables import MulTable, check_law, classify_loop, quasigroup_from_mul

__version__ = "0.1.0"

__all__ = [
    "BraidedSet", "MulTable", "Permutation", "automorphism_group", "check_law", "classify_loop",
    "is_dihedral", "is_solution", "is_triality", "lbds_isomorphic", "n_ci", "quasigroup_from_mul",
]
