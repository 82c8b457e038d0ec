"""Reference evaluator and the three announcement update engines.

Evaluation labels the worlds of a model with the truth set of each
subformula.  An announcement node builds the updated model once, labels the
body there, and maps the result back through the designated-world rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from scipy.cluster.hierarchy import DisjointSet

from .formula import (
    And,
    Announce,
    AtLeastDepth,
    Atom,
    ExactDepth,
    Formula,
    Knows,
    KnowsInf,
    Not,
    TOP,
    modal_depth,
)
from .model import KripkeModel, RelationKind, size_norm


class Semantics(Enum):
    DPAL = "dpal"
    EDPAL = "edpal"
    ADPAL = "adpal"


class SemanticsError(ValueError):
    pass


@dataclass
class UpdateStats:
    """Running counters for the size guarantees of the update engines."""

    dpal_updates: int = 0
    dpal_size_violations: int = 0
    edpal_updates: int = 0
    edpal_growth: int = 0

    def reset(self) -> None:
        self.dpal_updates = self.dpal_size_violations = 0
        self.edpal_updates = self.edpal_growth = 0

    def absorb(self, dpal_updates: int, dpal_violations: int, edpal_updates: int, edpal_growth: int) -> None:
        self.dpal_updates += dpal_updates
        self.dpal_size_violations += dpal_violations
        self.edpal_updates += edpal_updates
        self.edpal_growth += edpal_growth


STATS = UpdateStats()


def check_kind(m: KripkeModel, sem: Semantics) -> None:
    if sem is not Semantics.ADPAL and m.kind is not RelationKind.EQUIVALENCE:
        raise SemanticsError(f"{sem.value} needs equivalence relations, model is {m.kind.value}")


# -- update engines ----------------------------------------------------------


def _dpal_update(m: KripkeModel, ann: frozenset[str], da: int) -> KripkeModel:
    zero = {w: "0:" + w for w in m.worlds}
    one = {w: "1:" + w for w in m.worlds if w in ann}
    worlds = tuple(zero.values()) + tuple(one.values())
    rel = {}
    for a in m.agents:
        ds = DisjointSet(worlds)
        for s, t in m.rel[a]:
            ds.merge(zero[s], zero[t])
            if s in one and t in one:
                ds.merge(one[s], one[t])
        for s in one:
            if m.depth[(a, s)] < da:
                ds.merge(one[s], zero[s])
        rel[a] = frozenset((x, y) for cls in ds.subsets() for x in cls for y in cls)
    val = {zero[w]: m.val[w] for w in m.worlds}
    val.update({one[w]: m.val[w] for w in one})
    depth = {}
    for a in m.agents:
        for w in m.worlds:
            d = m.depth[(a, w)]
            depth[(a, zero[w])] = d
            if w in one:
                depth[(a, one[w])] = d if d < da else d - da
    out = KripkeModel(worlds, m.agents, rel, val, depth, RelationKind.EQUIVALENCE, m.atoms, m.signed_depths)
    STATS.dpal_updates += 1
    if size_norm(out) > 4 * size_norm(m):
        STATS.dpal_size_violations += 1
    return out


def _edpal_update(m: KripkeModel, ann: frozenset[str], da: int) -> KripkeModel:
    worlds = tuple(w for w in m.worlds if w in ann)
    rel = {a: frozenset((s, t) for s, t in m.rel[a] if s in ann and t in ann) for a in m.agents}
    val = {w: m.val[w] for w in worlds}
    depth = {(a, w): m.depth[(a, w)] - da for a in m.agents for w in worlds}
    out = KripkeModel(worlds, m.agents, rel, val, depth, m.kind, m.atoms, True)
    STATS.edpal_updates += 1
    if size_norm(out) > size_norm(m):
        STATS.edpal_growth += 1
    return out


def _adpal_update(m: KripkeModel, ann: frozenset[str], da: int) -> KripkeModel:
    rel = {}
    depth = {}
    for a in m.agents:
        deep = {w for w in m.worlds if m.depth[(a, w)] >= da}
        rel[a] = frozenset((s, t) for s, t in m.rel[a] if s not in deep or ((s in ann) == (t in ann)))
        for w in m.worlds:
            d = m.depth[(a, w)]
            depth[(a, w)] = d - da if w in deep else d
    return KripkeModel(m.worlds, m.agents, rel, m.val, depth, RelationKind.REFLEXIVE, m.atoms, m.signed_depths)


_ENGINES = {
    Semantics.DPAL: _dpal_update,
    Semantics.EDPAL: _edpal_update,
    Semantics.ADPAL: _adpal_update,
}


def designated(sem: Semantics, world: str) -> str:
    """Name of the post-update world standing for ``world``."""
    return "1:" + world if sem is Semantics.DPAL else world


# -- labeling evaluator -------------------------------------------------------


class _Labeler:
    def __init__(self, sem: Semantics):
        self.sem = sem
        self.cache: dict[tuple[int, Formula], frozenset[str]] = {}
        self.keep: list[KripkeModel] = []  # holds updated models so their ids stay unique

    def label(self, m: KripkeModel, f: Formula) -> frozenset[str]:
        key = (id(m), f)
        out = self.cache.get(key)
        if out is None:
            out = self._compute(m, f)
            self.cache[key] = out
        return out

    def _agent(self, m: KripkeModel, a: str) -> str:
        if a not in m.agents:
            raise SemanticsError(f"unknown agent {a!r}")
        return a

    def _compute(self, m: KripkeModel, f: Formula) -> frozenset[str]:
        if isinstance(f, Atom):
            if f == TOP:
                return m.world_set
            return frozenset(w for w in m.worlds if f.name in m.val[w])
        if isinstance(f, ExactDepth):
            a = self._agent(m, f.agent)
            return frozenset(w for w in m.worlds if m.depth[(a, w)] == f.d)
        if isinstance(f, AtLeastDepth):
            a = self._agent(m, f.agent)
            return frozenset(w for w in m.worlds if m.depth[(a, w)] >= f.d)
        if isinstance(f, Not):
            return m.world_set - self.label(m, f.sub)
        if isinstance(f, And):
            return self.label(m, f.left) & self.label(m, f.right)
        if isinstance(f, (Knows, KnowsInf)):
            a = self._agent(m, f.agent)
            sub = self.label(m, f.sub)
            succ = m.successors[a]
            need = modal_depth(f.sub) if isinstance(f, Knows) else None
            return frozenset(
                w for w in m.worlds
                if (need is None or m.depth[(a, w)] >= need) and all(t in sub for t in succ[w])
            )
        if isinstance(f, Announce):
            ann = self.label(m, f.announced)
            if not ann:
                return m.world_set
            child = _ENGINES[self.sem](m, ann, modal_depth(f.announced))
            self.keep.append(child)
            body = self.label(child, f.body)
            return frozenset(w for w in m.worlds if w not in ann or designated(self.sem, w) in body)
        raise TypeError(f"not a formula: {f!r}")


def truth_set(m: KripkeModel, f: Formula, sem: Semantics = Semantics.DPAL) -> frozenset[str]:
    """Worlds of ``m`` where ``f`` holds."""
    check_kind(m, sem)
    return _Labeler(sem).label(m, f)


def eval(m: KripkeModel, s: str, f: Formula, sem: Semantics = Semantics.DPAL) -> bool:  # noqa: A001
    if s not in m.world_set:
        raise SemanticsError(f"unknown world {s!r}")
    return s in truth_set(m, f, sem)


def valid_in(m: KripkeModel, f: Formula, sem: Semantics = Semantics.DPAL) -> bool:
    return truth_set(m, f, sem) == m.world_set


def update(m: KripkeModel, announced: Formula, sem: Semantics = Semantics.DPAL) -> KripkeModel:
    """The model after publicly announcing ``announced``."""
    ann = truth_set(m, announced, sem)
    return _ENGINES[sem](m, ann, modal_depth(announced))
