"""Depth-bounded epistemic logic: formulas, models, announcement semantics,
satisfiability, muddy-children experiments and axiom sweeps."""

from .formula import Formula, Logic, modal_depth, parse, render
from .kernel import BACKEND
from .model import KripkeModel, RelationKind, load, load_file
from .satisfiability import UNSAT, Sat, satisfiable
from .semantics import Semantics, eval, truth_set, update, valid_in

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Formula", "KripkeModel", "Logic", "RelationKind", "Sat", "Semantics", "UNSAT",
    "eval", "load", "load_file", "modal_depth", "parse", "render", "satisfiable", "truth_set",
    "update", "valid_in",
]
