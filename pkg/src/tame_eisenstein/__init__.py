"""Eisenstein congruences for tame level N via Mazur-Tate elements, group-ring
Eisenstein series, modular symbols and tame local regulators."""

from .exact_arith import AdmissibilityError, PrecisionError, admissible_triple
from .tame_group_ring import LambdaElt, TameContext

__all__ = ["AdmissibilityError", "PrecisionError", "admissible_triple", "LambdaElt", "TameContext"]
__version__ = "0.1.0"
