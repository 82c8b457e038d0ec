"""Seeded random formulas shared by the cross-check tests."""

from __future__ import annotations

import random

from depthlogic.formula import (
    And,
    Announce,
    AtLeastDepth,
    Atom,
    ExactDepth,
    Formula,
    Knows,
    KnowsInf,
    Not,
    Or,
    modal_depth,
)

AGENTS = ("a", "b")
ATOMS = ("p", "q")


def random_formula(rng: random.Random, budget: int = 4, modal: int = 2, max_d: int = 3,
                   knows_inf: bool = False, announcements: bool = False) -> Formula:
    """A random formula of modal depth at most ``modal``; ``budget`` bounds the nesting."""
    if budget <= 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.6:
            return Atom(rng.choice(ATOMS))
        if r < 0.8:
            return ExactDepth(rng.choice(AGENTS), rng.randint(0, max_d))
        return AtLeastDepth(rng.choice(AGENTS), rng.randint(0, max_d))
    ops = ["not", "and", "or"]
    if modal > 0:
        ops += ["K", "K"] + (["Ki"] if knows_inf else [])
    if announcements and modal > 0:
        ops.append("ann")
    op = rng.choice(ops)
    sub = lambda m=modal: random_formula(rng, budget - 1, m, max_d, knows_inf, announcements)  # noqa: E731
    if op == "not":
        return Not(sub())
    if op == "and":
        return And(sub(), sub())
    if op == "or":
        return Or(sub(), sub())
    if op == "K":
        return Knows(rng.choice(AGENTS), sub(modal - 1))
    if op == "Ki":
        return KnowsInf(rng.choice(AGENTS), sub(modal - 1))
    left = sub(modal - 1)
    return Announce(left, sub(modal - modal_depth(left)))


def formula_corpus(seed: int, count: int, **kw) -> list[Formula]:
    rng = random.Random(seed)
    out: list[Formula] = []
    seen = set()
    while len(out) < count:
        f = random_formula(rng, **kw)
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out
