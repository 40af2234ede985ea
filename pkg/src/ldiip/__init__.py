"""Executable semantics, proof checking and decision procedure for LDiiP,
a modal logic of negation-complete interactive proofs."""

from .concrete import eval_concrete, parse_state
from .corpus import derive_regularity
from .decide import CounterModel, Valid, ValidUpTo, compile_singleton, decide, decide_via_compilation, satisfiable
from .knowledge import closure_members, derivable
from .model import FiniteModel, enumerate_models, eval, filtrate, global_truth, parse_model, render_model, validate_interface
from .proof import check_derivation, is_axiom, is_tautology_instance, parse_derivation
from .syntax import parse_formula, parse_message, render

__version__ = "0.1.0"

__all__ = [
    "CounterModel",
    "FiniteModel",
    "Valid",
    "ValidUpTo",
    "check_derivation",
    "closure_members",
    "compile_singleton",
    "decide",
    "decide_via_compilation",
    "derivable",
    "derive_regularity",
    "enumerate_models",
    "eval",
    "eval_concrete",
    "filtrate",
    "global_truth",
    "is_axiom",
    "is_tautology_instance",
    "parse_derivation",
    "parse_formula",
    "parse_message",
    "parse_model",
    "parse_state",
    "render",
    "render_model",
    "satisfiable",
    "validate_interface",
]
