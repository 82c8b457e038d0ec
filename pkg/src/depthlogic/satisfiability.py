"""Satisfiability by type elimination over the closure of the translated formula.

Knowledge and announcements are first rewritten away, leaving atoms, depth
atoms, negation, conjunction and unbounded knowledge.  Candidate types are
proposed by fixing the atoms, one depth per agent and the ``Ki`` members;
every proposal is then vetted by ``is_type``.  Types whose negative
knowledge demands cannot be met by a surviving type sharing the same
knowledge set are deleted until nothing changes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .formula import (
    TOP,
    And,
    AtLeastDepth,
    Atom,
    ExactDepth,
    Formula,
    FragmentError,
    KnowsInf,
    Logic,
    Not,
    agents_of,
    closure,
    eliminate,
    render,
    size,
)
from .kernel import representatives
from .model import KripkeModel, build
from .semantics import Semantics, eval as evaluate


@dataclass(frozen=True)
class TypeSet:
    members: frozenset[Formula]
    context: frozenset[Formula]


@dataclass(frozen=True)
class Sat:
    witness: KripkeModel
    world: str

    def __str__(self) -> str:
        return "SAT"


@dataclass(frozen=True)
class Unsat:
    def __str__(self) -> str:
        return "UNSAT"


UNSAT = Unsat()


def _depth_literal(g: Formula):
    """``(agent, kind, d, positive)`` for depth atoms and their negations, else None."""
    positive = True
    if isinstance(g, Not):
        g, positive = g.sub, False
    if isinstance(g, ExactDepth):
        return g.agent, "E", g.d, positive
    if isinstance(g, AtLeastDepth):
        return g.agent, "P", g.d, positive
    return None


def assign_depths(gamma: Iterable[Formula]) -> dict[str, int] | None:
    """Least non-negative depth per agent meeting every depth literal of ``gamma``."""
    lo: dict[str, int] = {}
    hi: dict[str, int] = {}
    eq: dict[str, set[int]] = {}
    neq: dict[str, set[int]] = {}
    for g in gamma:
        lit = _depth_literal(g)
        if lit is None:
            continue
        a, kind, d, positive = lit
        lo.setdefault(a, 0)
        if kind == "P" and positive:
            lo[a] = max(lo[a], d)
        elif kind == "P":
            hi[a] = min(hi.get(a, d), d)  # depth < d
        elif positive:
            eq.setdefault(a, set()).add(d)
        else:
            neq.setdefault(a, set()).add(d)
    out = {}
    for a in lo:
        if len(eq.get(a, ())) > 1:
            return None
        if a in eq:
            (v,) = eq[a]
            if v < lo[a]:
                return None
        else:
            v = lo[a]
            while v in neq.get(a, ()):
                v += 1
        if v in neq.get(a, ()) or (a in hi and v >= hi[a]):
            return None
        out[a] = v
    return out


def is_type(gamma: Iterable[Formula], cl: Iterable[Formula]) -> bool:
    gamma = frozenset(gamma)
    cl = frozenset(cl)
    if not gamma <= cl:
        raise ValueError("type candidate is not a subset of the closure")
    if TOP in cl and TOP not in gamma:
        return False
    for g in cl:
        if Not(g) in cl and (Not(g) in gamma) == (g in gamma):
            return False  # rule 1
        if isinstance(g, And) and (g in gamma) != (g.left in gamma and g.right in gamma):
            return False  # rule 2
    exact: dict[str, list[int]] = {}
    not_exact: dict[str, set[int]] = {}
    at_least: dict[str, list[int]] = {}
    below: dict[str, list[int]] = {}
    for g in gamma:
        if isinstance(g, KnowsInf) and g.sub not in gamma:
            return False  # rule 3
        lit = _depth_literal(g)
        if lit is None:
            continue
        a, kind, d, positive = lit
        bucket = {("E", True): exact, ("P", True): at_least, ("P", False): below}.get((kind, positive))
        if bucket is None:
            not_exact.setdefault(a, set()).add(d)
        else:
            bucket.setdefault(a, []).append(d)
    for a, ds in at_least.items():  # rule 4
        for d in ds:
            if any(e < d for e in below.get(a, ())) or any(e < d for e in exact.get(a, ())):
                return False
    for a, ds in exact.items():  # rule 5
        if len(set(ds)) > 1:
            return False
        if any(e < ds[0] for e in below.get(a, ())):
            return False
    for a, ds in below.items():
        for d in ds:
            if d <= 0:
                return False  # rule 7, and rule 6 has no candidate below 0
            if all(e in not_exact.get(a, ()) for e in range(d)):
                return False  # rule 6
    return assign_depths(gamma) is not None


# -- type elimination --------------------------------------------------------------


class _Table:
    """Closure indexed for bitmask types: bit i stands for ``positives[i]``."""

    def __init__(self, root: Formula):
        self.root = root
        self.cl = closure([root])
        self.positives = sorted((g for g in self.cl if not isinstance(g, Not)), key=lambda g: (size(g), render(g)))
        self.bit = {g: i for i, g in enumerate(self.positives)}
        self.atoms = [g for g in self.positives if isinstance(g, Atom) and g != TOP]
        self.kis = [g for g in self.positives if isinstance(g, KnowsInf)]
        depth_atoms = [g for g in self.positives if isinstance(g, (ExactDepth, AtLeastDepth))]
        self.depth_agents = sorted({g.agent for g in depth_atoms})
        cuts: dict[str, set[int]] = {a: set() for a in self.depth_agents}
        for g in depth_atoms:
            cuts[g.agent].add(g.d)
            if isinstance(g, ExactDepth):
                cuts[g.agent].add(g.d + 1)
        self.depth_choices = [representatives(cuts[a], None) for a in self.depth_agents]

    def holds(self, g: Formula, mask: int) -> bool:
        if isinstance(g, Not):
            return not self.holds(g.sub, mask)
        return bool(mask >> self.bit[g] & 1)

    def members(self, mask: int) -> frozenset[Formula]:
        """Every closure member true under ``mask``, negations included."""
        return frozenset(g for g in self.cl if self.holds(g, mask))

    def candidates(self):
        """Every assignment to atoms, agent depths and ``Ki`` members, closed under Boolean structure."""
        for atom_bits in itertools.product((False, True), repeat=len(self.atoms)):
            for depths in itertools.product(*self.depth_choices):
                dmap = dict(zip(self.depth_agents, depths))
                for ki_bits in itertools.product((False, True), repeat=len(self.kis)):
                    truth: dict[Formula, bool] = dict(zip(self.atoms, atom_bits))
                    truth.update(zip(self.kis, ki_bits))
                    mask = 0
                    for g in self.positives:
                        if g in truth:
                            v = truth[g]
                        elif g == TOP:
                            v = True
                        elif isinstance(g, ExactDepth):
                            v = dmap[g.agent] == g.d
                        elif isinstance(g, AtLeastDepth):
                            v = dmap[g.agent] >= g.d
                        elif isinstance(g, And):
                            v = self.holds(g.left, mask) and self.holds(g.right, mask)
                        else:
                            raise TypeError(f"unexpected closure member {g!r}")
                        if v:
                            mask |= 1 << self.bit[g]
                    yield mask


def _eliminate(table: _Table, types: list[int]) -> list[int]:
    by_agent: dict[str, list[KnowsInf]] = {}
    for g in table.kis:
        by_agent.setdefault(g.agent, []).append(g)
    keys = {a: sum(1 << table.bit[g] for g in gs) for a, gs in by_agent.items()}
    alive = set(types)
    while True:
        # for each agent and knowledge set, which Ki bodies fail somewhere among the survivors
        refuted: dict[tuple[str, int], set[Formula]] = {}
        for t in alive:
            for a, gs in by_agent.items():
                slot = refuted.setdefault((a, t & keys[a]), set())
                for g in gs:
                    if not table.holds(g.sub, t):
                        slot.add(g)
        dead = set()
        for t in alive:
            for a, gs in by_agent.items():
                slot = refuted[(a, t & keys[a])]
                if any(not (t >> table.bit[g] & 1) and g not in slot for g in gs):
                    dead.add(t)
                    break
        if not dead:
            return [t for t in types if t in alive]
        alive -= dead


def _witness(table: _Table, alive: list[int], start: int, agents: list[str]) -> tuple[KripkeModel, str]:
    by_agent: dict[str, int] = {a: 0 for a in agents}
    for g in table.kis:
        by_agent[g.agent] |= 1 << table.bit[g]
    # grow from the chosen type, adding one witness per unmet negative demand
    component = [start]
    i = 0
    while i < len(component):
        t = component[i]
        i += 1
        for g in table.kis:
            if t >> table.bit[g] & 1:
                continue
            key = by_agent[g.agent]

            def meets(u: int) -> bool:
                return (u & key) == (t & key) and not table.holds(g.sub, u)

            if not any(meets(u) for u in component):
                component.append(next(u for u in alive if meets(u)))
    names = {t: f"t{j}" for j, t in enumerate(component)}
    generators = {}
    for a, key in by_agent.items():
        generators[a] = [(names[t], names[u]) for t in component for u in component if (t & key) == (u & key)]
    val = {names[t]: {g.name for g in table.atoms if t >> table.bit[g] & 1} for t in component}
    depth = {}
    for t in component:
        assigned = assign_depths(table.members(t)) or {}
        for a in agents:
            depth[(a, names[t])] = assigned.get(a, 0)
    atoms = sorted(g.name for g in table.atoms)
    return build(list(names.values()), agents, generators, val, depth, atoms=atoms), names[start]


def satisfiable(f: Formula, logic: Logic = Logic.DBEL) -> Sat | Unsat:
    """Decide satisfiability of ``f``; a Sat answer carries a checked witness."""
    g = eliminate(f, logic, keep_at_least=True)
    table = _Table(g)
    types = []
    seen = set()
    for mask in table.candidates():
        if mask not in seen:
            seen.add(mask)
            if is_type(table.members(mask), table.cl):
                types.append(mask)
    alive = _eliminate(table, types)
    hits = [t for t in alive if table.holds(g, t)]
    if not hits:
        return UNSAT
    agents = sorted(agents_of(f))
    witness, world = _witness(table, alive, hits[0], agents)
    sem = Semantics.EDPAL if logic is Logic.EDPAL else Semantics.DPAL
    if not evaluate(witness, world, f, sem):
        raise AssertionError(f"witness check failed for {render(f)}")
    return Sat(witness, world)


__all__ = ["Sat", "TypeSet", "UNSAT", "Unsat", "assign_depths", "is_type", "satisfiable", "FragmentError"]
