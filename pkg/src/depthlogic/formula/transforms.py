"""Syntactic transformations: closure, the no-leakage guard, and reduction to S5D."""

from __future__ import annotations

from enum import Enum
from typing import Iterable

from .syntax import (
    TOP,
    And,
    Announce,
    AtLeastDepth,
    Atom,
    ExactDepth,
    Formula,
    Implies,
    Knows,
    KnowsInf,
    Not,
    Or,
    conj,
    modal_depth,
    walk,
)


class Logic(Enum):
    DBEL = "dbel"
    EDPAL = "edpal"


class FragmentError(ValueError):
    pass


def closure(roots: Iterable[Formula]) -> frozenset[Formula]:
    """Smallest superset of ``roots`` closed under subformulas and single negation."""
    out: set[Formula] = set()
    todo = list(roots)
    while todo:
        f = todo.pop()
        if f in out:
            continue
        if isinstance(f, (Announce, Knows)):
            raise FragmentError(f"closure expects announcement-free, K-free input; got {type(f).__name__}")
        out.add(f)
        if isinstance(f, Not):
            todo.append(f.sub)
        else:
            todo.append(Not(f))
            if isinstance(f, And):
                todo += [f.left, f.right]
            elif isinstance(f, KnowsInf):
                todo.append(f.sub)
    return frozenset(out)


def f_phi(announced: Formula, psi: Formula) -> Formula:
    """Guard formula under which agents keep their knowledge of ``psi`` across ``announced``."""
    da = modal_depth(announced)

    def shallow_somewhere(a: str) -> Formula:
        return Not(KnowsInf(a, Implies(announced, AtLeastDepth(a, da))))

    def go(g: Formula) -> Formula:
        if isinstance(g, (Atom, ExactDepth, AtLeastDepth)):
            return TOP
        if isinstance(g, Not):
            return go(g.sub)
        if isinstance(g, And):
            return And(go(g.left), go(g.right))
        if isinstance(g, Knows):
            a = g.agent
            deep_enough = Or(Not(AtLeastDepth(a, da)), AtLeastDepth(a, da + modal_depth(g.sub)))
            return conj(
                shallow_somewhere(a),
                KnowsInf(a, Implies(announced, deep_enough)),
                KnowsInf(a, go(g.sub)),
            )
        if isinstance(g, KnowsInf):
            return And(shallow_somewhere(g.agent), KnowsInf(g.agent, go(g.sub)))
        if isinstance(g, Announce):
            return And(go(g.announced), go(g.body))
        raise TypeError(f"not a formula: {g!r}")

    return go(psi)


def at_least_as_exact(agent: str, d: int) -> Formula:
    """``P[a,d]`` as a conjunction of negated exact-depth atoms (valid when depths are >= 0)."""
    if d <= 0:
        return TOP
    return conj(*(Not(ExactDepth(agent, i)) for i in range(d)))


def _announce_into(announced: Formula, body: Formula, da: int) -> Formula:
    """``[announced] body`` for an announcement-free, K-free ``body`` under eager updates."""
    if isinstance(body, Atom):
        return Implies(announced, body)
    if isinstance(body, ExactDepth):
        return Implies(announced, ExactDepth(body.agent, da + body.d))
    if isinstance(body, AtLeastDepth):
        return Implies(announced, AtLeastDepth(body.agent, da + body.d))
    if isinstance(body, Not):
        return Implies(announced, Not(_announce_into(announced, body.sub, da)))
    if isinstance(body, And):
        return And(_announce_into(announced, body.left, da), _announce_into(announced, body.right, da))
    if isinstance(body, KnowsInf):
        return Implies(announced, KnowsInf(body.agent, _announce_into(announced, body.sub, da)))
    raise TypeError(f"unexpected node in reduced body: {body!r}")


def eliminate(f: Formula, logic: Logic = Logic.EDPAL, keep_at_least: bool = False) -> Formula:
    """Rewrite ``f`` into an equivalent formula over atoms, depth atoms, ``~``, ``&`` and ``Ki``.

    ``K[a] x`` becomes ``P[a,d(x)] & Ki[a] x``; announcements are removed
    innermost-first with the eager-update reduction laws.  ``P`` atoms are kept
    when ``keep_at_least`` is set, otherwise expanded into exact-depth atoms.
    """
    if logic is Logic.DBEL and any(isinstance(g, Announce) for g in walk(f)):
        raise FragmentError("announcements are not part of the announcement-free logic")

    def go(g: Formula) -> Formula:
        if isinstance(g, (Atom, ExactDepth, AtLeastDepth)):
            return g
        if isinstance(g, Not):
            return Not(go(g.sub))
        if isinstance(g, And):
            return And(go(g.left), go(g.right))
        if isinstance(g, Knows):
            return And(AtLeastDepth(g.agent, modal_depth(g.sub)), KnowsInf(g.agent, go(g.sub)))
        if isinstance(g, KnowsInf):
            return KnowsInf(g.agent, go(g.sub))
        if isinstance(g, Announce):
            # depth is preserved by the rewriting, so d(announced) can be read off either form
            return _announce_into(go(g.announced), go(g.body), modal_depth(g.announced))
        raise TypeError(f"not a formula: {g!r}")

    out = go(f)
    if keep_at_least:
        return out
    return _expand_at_least(out)


def _expand_at_least(g: Formula) -> Formula:
    if isinstance(g, AtLeastDepth):
        return at_least_as_exact(g.agent, g.d)
    if isinstance(g, (Atom, ExactDepth)):
        return g
    if isinstance(g, Not):
        return Not(_expand_at_least(g.sub))
    if isinstance(g, And):
        left, right = _expand_at_least(g.left), _expand_at_least(g.right)
        # P[a,0] expands to true; drop it rather than leave 'true & x' behind
        if isinstance(g.left, AtLeastDepth) and left == TOP:
            return right
        return And(left, right)
    if isinstance(g, KnowsInf):
        return KnowsInf(g.agent, _expand_at_least(g.sub))
    raise TypeError(f"unexpected node: {g!r}")


def translate_s5d(f: Formula, logic: Logic = Logic.DBEL) -> Formula:
    """Equivalent S5D formula (atoms, exact depths, ``~``, ``&``, ``Ki`` only).

    Equivalence holds on models whose depths are non-negative, i.e. every
    user-authored model.
    """
    return eliminate(f, logic, keep_at_least=False)
