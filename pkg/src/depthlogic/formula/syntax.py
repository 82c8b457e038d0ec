"""Syntax tree for the depth-bounded epistemic language.

Eight core constructors; everything else (``true``, ``false``, ``|``, ``->``,
``<->``, ``<phi> psi``) is sugar that expands into them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Union

_TOKEN = re.compile(r"[A-Za-z0-9_]+\Z")

TRUE_NAME = "true"


def check_agent(name: str) -> str:
    if not isinstance(name, str) or not _TOKEN.match(name):
        raise ValueError(f"invalid agent name {name!r}")
    return name


@dataclass(frozen=True, slots=True)
class Atom:
    name: str


@dataclass(frozen=True, slots=True)
class ExactDepth:
    agent: str
    d: int


@dataclass(frozen=True, slots=True)
class AtLeastDepth:
    agent: str
    d: int


@dataclass(frozen=True, slots=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Knows:
    agent: str
    sub: "Formula"


@dataclass(frozen=True, slots=True)
class KnowsInf:
    agent: str
    sub: "Formula"


@dataclass(frozen=True, slots=True)
class Announce:
    announced: "Formula"
    body: "Formula"


Formula = Union[Atom, ExactDepth, AtLeastDepth, Not, And, Knows, KnowsInf, Announce]

TOP = Atom(TRUE_NAME)
BOTTOM = Not(TOP)


def Or(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def Implies(left: Formula, right: Formula) -> Formula:
    return Not(And(left, Not(right)))


def Iff(left: Formula, right: Formula) -> Formula:
    return And(Implies(left, right), Implies(right, left))


def Diamond(announced: Formula, body: Formula) -> Formula:
    """``<announced> body``, i.e. ``~[announced]~body``."""
    return Not(Announce(announced, Not(body)))


def conj(*parts: Formula) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    if not parts:
        return BOTTOM
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Not, Knows, KnowsInf)):
        return (f.sub,)
    if isinstance(f, And):
        return (f.left, f.right)
    if isinstance(f, Announce):
        return (f.announced, f.body)
    return ()


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal of every node (shared subtrees visited once each time they occur)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def modal_depth(f: Formula) -> int:
    if isinstance(f, (Atom, ExactDepth, AtLeastDepth)):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.sub)
    if isinstance(f, And):
        return max(modal_depth(f.left), modal_depth(f.right))
    if isinstance(f, (Knows, KnowsInf)):
        return 1 + modal_depth(f.sub)
    if isinstance(f, Announce):
        return modal_depth(f.announced) + modal_depth(f.body)
    raise TypeError(f"not a formula: {f!r}")


def agents_of(f: Formula) -> set[str]:
    return {g.agent for g in walk(f) if isinstance(g, (ExactDepth, AtLeastDepth, Knows, KnowsInf))}


def atoms_of(f: Formula) -> set[str]:
    """Propositional atoms, excluding the reserved ``true``."""
    return {g.name for g in walk(f) if isinstance(g, Atom) and g.name != TRUE_NAME}


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


# -- fragments -------------------------------------------------------------


class FragmentKind(Enum):
    LINF = "Linf"
    L = "L"
    HINF = "Hinf"
    H = "H"
    AGENT_INF = "LagentInf"
    S5D = "S5D"


@dataclass(frozen=True)
class Fragment:
    kind: FragmentKind
    agent: str | None = None

    def __str__(self) -> str:
        if self.kind is FragmentKind.AGENT_INF:
            return f"LagentInf({self.agent})"
        return self.kind.value


LINF = Fragment(FragmentKind.LINF)
L = Fragment(FragmentKind.L)
HINF = Fragment(FragmentKind.HINF)
H = Fragment(FragmentKind.H)
S5D = Fragment(FragmentKind.S5D)


def agent_fragment(agent: str) -> Fragment:
    return Fragment(FragmentKind.AGENT_INF, check_agent(agent))


def _node_allowed(g: Formula, frag: Fragment) -> bool:
    k = frag.kind
    if k is FragmentKind.LINF:
        return True
    if k is FragmentKind.L:
        return not isinstance(g, KnowsInf)
    if k is FragmentKind.HINF:
        return not isinstance(g, Announce)
    if k is FragmentKind.H:
        return not isinstance(g, (KnowsInf, Announce))
    if k is FragmentKind.AGENT_INF:
        if isinstance(g, (ExactDepth, AtLeastDepth)):
            return False
        if isinstance(g, (Knows, KnowsInf)):
            return g.agent == frag.agent
        return True
    if k is FragmentKind.S5D:
        return isinstance(g, (Atom, ExactDepth, Not, And, KnowsInf))
    raise ValueError(f"unknown fragment {frag!r}")


def in_fragment(f: Formula, frag: Fragment) -> bool:
    return all(_node_allowed(g, frag) for g in walk(f))
