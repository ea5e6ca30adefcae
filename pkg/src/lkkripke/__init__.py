"""Classical Kripke semantics for the LK-mu-mu~ sequent calculus: a proof
checker, a forcing evaluator over finite models, and cut elimination by
normalization by evaluation."""

from .calculus import CheckError, Derivation, Rule, check, is_normal
from .kripke import FiniteModel, forces, forces_intuitionistic, refutes, srefutes
from .nbe import normalize
from .syntax import dn_translate, parse_formula, print_formula

__all__ = [
    "CheckError", "Derivation", "Rule", "check", "is_normal",
    "FiniteModel", "forces", "forces_intuitionistic", "refutes", "srefutes",
    "normalize", "dn_translate", "parse_formula", "print_formula",
]
