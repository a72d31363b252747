"""Twisted Reidemeister torsion with adjoint SL_n(C) coefficients."""

from .cellsys import CellSystem, NumericChainComplex, elementary_expand, relift, twist, union_along
from .errors import DegenerateAssembly, ParseError, TorsionError, ValidationError
from .liealg import Representation, adjoint_data, orthonormal_basis
from .linalg import DEFAULT_TOL, Tolerance, eq_up_to_sign
from .spaces import SpaceRecipe, connected_sum, disk_standard_basis, disk_sum, make_space, puncture
from .torsion import (
    TorsionValue,
    homology_basis,
    homology_dims,
    mv_problem,
    normalize_bases_via_mv,
    reidemeister_torsion,
    torsion_acyclic,
    verify_multiplicativity,
)

__version__ = "0.1.0"

__all__ = [
    "CellSystem",
    "NumericChainComplex",
    "elementary_expand",
    "relift",
    "twist",
    "union_along",
    "DegenerateAssembly",
    "ParseError",
    "TorsionError",
    "ValidationError",
    "Representation",
    "adjoint_data",
    "orthonormal_basis",
    "DEFAULT_TOL",
    "Tolerance",
    "eq_up_to_sign",
    "SpaceRecipe",
    "connected_sum",
    "disk_standard_basis",
    "disk_sum",
    "make_space",
    "puncture",
    "TorsionValue",
    "homology_basis",
    "homology_dims",
    "mv_problem",
    "normalize_bases_via_mv",
    "reidemeister_torsion",
    "torsion_acyclic",
    "verify_multiplicativity",
]
