"""Minimal-length elements of conjugacy classes with finite Coxeter part in
(extended, possibly twisted) affine Weyl groups."""

__version__ = "0.1.0"

from .root_system import RootSystem, RootSystemError, build_root_system, twist_permutation
from .finite_weyl import FiniteWeylElement, FiniteWeylGroup
from .affine_weyl import AffineElement, AffineWeylGroup, OmegaElement
from .conjugacy import (
    BudgetExceeded,
    ClassReport,
    descent_closure,
    has_finite_coxeter_part,
    parabolic_coxeter_elements,
    verify_main_theorem,
)
from .classification import CoinvariantGroup, kottwitz, lattice_identity_check
from .case_tables import CaseEntry, derive_entry, table_entries, verify_entry

__all__ = [
    "RootSystem",
    "RootSystemError",
    "build_root_system",
    "twist_permutation",
    "FiniteWeylElement",
    "FiniteWeylGroup",
    "AffineElement",
    "AffineWeylGroup",
    "OmegaElement",
    "BudgetExceeded",
    "ClassReport",
    "descent_closure",
    "has_finite_coxeter_part",
    "parabolic_coxeter_elements",
    "verify_main_theorem",
    "CoinvariantGroup",
    "kottwitz",
    "lattice_identity_check",
    "CaseEntry",
    "derive_entry",
    "table_entries",
    "verify_entry",
]
