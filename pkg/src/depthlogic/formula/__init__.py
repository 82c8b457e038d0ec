from .parser import FormulaSyntaxError, parse, render, tokenize
from .syntax import (
    BOTTOM,
    H,
    HINF,
    L,
    LINF,
    S5D,
    TOP,
    And,
    Announce,
    AtLeastDepth,
    Atom,
    Diamond,
    ExactDepth,
    Formula,
    Fragment,
    FragmentKind,
    Iff,
    Implies,
    Knows,
    KnowsInf,
    Not,
    Or,
    agent_fragment,
    agents_of,
    atoms_of,
    check_agent,
    children,
    conj,
    disj,
    in_fragment,
    modal_depth,
    size,
    walk,
)
from .transforms import (
    FragmentError,
    Logic,
    at_least_as_exact,
    closure,
    eliminate,
    f_phi,
    translate_s5d,
)

__all__ = [
    "BOTTOM", "H", "HINF", "L", "LINF", "S5D", "TOP",
    "And", "Announce", "AtLeastDepth", "Atom", "Diamond", "ExactDepth", "Formula",
    "Fragment", "FragmentKind", "FragmentError", "FormulaSyntaxError", "Iff", "Implies",
    "Knows", "KnowsInf", "Logic", "Not", "Or",
    "agent_fragment", "agents_of", "at_least_as_exact", "atoms_of", "check_agent", "children",
    "closure", "conj", "disj", "eliminate", "f_phi", "in_fragment", "modal_depth", "parse",
    "render", "size", "tokenize", "translate_s5d", "walk",
]
