"""Partial translations on discrete metric spaces, realised as exact truncated partial isometries."""

from .freegroup import GElement, GNormalForm, Phi, Phi_inverse, Word, phi0, to_normal_form
from .operators import OperatorExpr, check_relation, rank, truncate
from .spaces import AugmentedTree, FreeGroup, Naturals, PositiveCone, Primes, PuncturedIntegers, build_window
from .translations import Shift, RightMult, domain_in_window

__all__ = [
    "AugmentedTree",
    "FreeGroup",
    "GElement",
    "GNormalForm",
    "Naturals",
    "OperatorExpr",
    "Phi",
    "Phi_inverse",
    "PositiveCone",
    "Primes",
    "PuncturedIntegers",
    "RightMult",
    "Shift",
    "Word",
    "build_window",
    "check_relation",
    "domain_in_window",
    "phi0",
    "rank",
    "to_normal_form",
    "truncate",
]
