"""Kripke models with per-agent, per-world depths.

Relations are explicit sets of ordered pairs so that the asymmetric updates
(which only keep reflexivity) can be represented alongside S5 models.
"""

from __future__ import annotations

import re
from importlib import resources
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping

from scipy.cluster.hierarchy import DisjointSet

from .formula import check_agent

INT64_MIN, INT64_MAX = -(2**63), 2**63 - 1


class RelationKind(Enum):
    EQUIVALENCE = "equivalence"
    REFLEXIVE = "reflexive"


class ModelFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


Pair = tuple[str, str]


@dataclass(frozen=True, eq=False)
class KripkeModel:
    worlds: tuple[str, ...]
    agents: tuple[str, ...]
    rel: Mapping[str, frozenset[Pair]]
    val: Mapping[str, frozenset[str]]
    depth: Mapping[tuple[str, str], int]
    kind: RelationKind = RelationKind.EQUIVALENCE
    atoms: tuple[str, ...] = ()
    # set on models built by the eager update, whose depths may go below zero
    signed_depths: bool = field(default=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return (
            set(self.worlds) == set(other.worlds)
            and set(self.agents) == set(other.agents)
            and set(self.atoms) == set(other.atoms)
            and self.kind == other.kind
            and {a: set(r) for a, r in self.rel.items()} == {a: set(r) for a, r in other.rel.items()}
            and dict(self.val) == dict(other.val)
            and dict(self.depth) == dict(other.depth)
        )

    __hash__ = None  # type: ignore[assignment]

    @cached_property
    def successors(self) -> dict[str, dict[str, tuple[str, ...]]]:
        out: dict[str, dict[str, list[str]]] = {a: {w: [] for w in self.worlds} for a in self.agents}
        for a, pairs in self.rel.items():
            for s, t in pairs:
                out[a][s].append(t)
        return {a: {w: tuple(ts) for w, ts in m.items()} for a, m in out.items()}

    @cached_property
    def world_set(self) -> frozenset[str]:
        return frozenset(self.worlds)

    def classes(self, agent: str) -> list[frozenset[str]]:
        """Equivalence classes of ``agent`` (meaningful for equivalence-kind models)."""
        seen: set[str] = set()
        out = []
        for w in self.worlds:
            if w not in seen:
                cls = frozenset(self.successors[agent][w])
                seen |= cls
                out.append(cls)
        return out

    def equivalence_closure(self) -> "KripkeModel":
        """Same model with every relation closed to an equivalence."""
        rel = {a: equivalence_pairs(self.worlds, self.rel[a]) for a in self.agents}
        return KripkeModel(self.worlds, self.agents, rel, self.val, self.depth,
                           RelationKind.EQUIVALENCE, self.atoms, self.signed_depths)


def equivalence_pairs(worlds: Iterable[str], generators: Iterable[Pair]) -> frozenset[Pair]:
    worlds = list(worlds)
    ds = DisjointSet(worlds)
    for s, t in generators:
        ds.merge(s, t)
    return frozenset((s, t) for cls in ds.subsets() for s in cls for t in cls)


def reflexive_pairs(worlds: Iterable[str], generators: Iterable[Pair]) -> frozenset[Pair]:
    return frozenset(generators) | {(w, w) for w in worlds}


def build(
    worlds: Iterable[str],
    agents: Iterable[str],
    generators: Mapping[str, Iterable[Pair]],
    val: Mapping[str, Iterable[str]],
    depth: Mapping[tuple[str, str], int],
    kind: RelationKind = RelationKind.EQUIVALENCE,
    atoms: Iterable[str] | None = None,
) -> KripkeModel:
    """Assemble a model, closing relation generators under ``kind``."""
    worlds = tuple(worlds)
    agents = tuple(check_agent(a) for a in agents)
    close = equivalence_pairs if kind is RelationKind.EQUIVALENCE else reflexive_pairs
    rel = {a: close(worlds, generators.get(a, ())) for a in agents}
    valuation = {w: frozenset(val.get(w, ())) for w in worlds}
    if atoms is None:
        atoms = sorted(set().union(*valuation.values())) if valuation else []
    return KripkeModel(worlds, agents, rel, valuation, dict(depth), kind, tuple(atoms))


# -- native text format ------------------------------------------------------

_WORLD = r"[^\s\-=>#]+"
_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")
_EDGE = re.compile(rf"({_WORLD})([->])({_WORLD})\Z")
_ASSIGN = re.compile(rf"(\*|{_WORLD})=(-?[0-9]+)\Z")


def load(source: str) -> KripkeModel:
    kind = RelationKind.EQUIVALENCE
    signed = False
    agents: list[str] | None = None
    worlds: list[str] | None = None
    declared_atoms: list[str] | None = None
    atom_worlds: dict[str, list[str]] = {}
    atom_lines: dict[str, int] = {}
    depth_lines: dict[str, tuple[int, str]] = {}
    rel_lines: dict[str, tuple[int, str]] = {}

    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key = line.split()[0]
        if key in ("kind", "agents", "worlds", "atoms", "depths"):
            args = line.split()[1:]  # world names may contain ':' (updated models)
            if key == "kind":
                if len(args) != 1 or args[0] not in ("equivalence", "reflexive"):
                    raise ModelFormatError("kind must be 'equivalence' or 'reflexive'", lineno)
                kind = RelationKind(args[0])
            elif key == "depths":
                if args != ["signed"]:
                    raise ModelFormatError("expected 'depths signed'", lineno)
                signed = True
            elif key == "agents":
                for a in args:
                    if not _IDENT.match(a):
                        raise ModelFormatError(f"invalid agent name {a!r}", lineno)
                if len(set(args)) != len(args):
                    raise ModelFormatError("duplicate agent name", lineno)
                agents = args
            elif key == "worlds":
                if len(set(args)) != len(args):
                    dup = next(w for w in args if args.count(w) > 1)
                    raise ModelFormatError(f"duplicate world name {dup!r}", lineno)
                worlds = args
            else:
                declared_atoms = args
            continue
        head, _, rest = line.partition(":")
        words = head.split()
        if key not in ("atom", "depth", "rel") or len(words) != 2 or not _:
            raise ModelFormatError(f"cannot parse line: {raw.strip()!r}", lineno)
        name = words[1]
        if key == "atom":
            if not _IDENT.match(name) or name == "true":
                raise ModelFormatError(f"invalid atom name {name!r}", lineno)
            if declared_atoms is not None and name not in declared_atoms:
                raise ModelFormatError(f"unknown atom {name!r}", lineno)
            if name in atom_worlds:
                raise ModelFormatError(f"atom {name!r} listed twice", lineno)
            atom_worlds[name] = rest.split()
            atom_lines[name] = lineno
        elif key == "depth":
            if name in depth_lines:
                raise ModelFormatError(f"depth for agent {name!r} given twice", lineno)
            depth_lines[name] = (lineno, rest)
        else:
            if name in rel_lines:
                raise ModelFormatError(f"relation for agent {name!r} given twice", lineno)
            rel_lines[name] = (lineno, rest)

    if agents is None:
        raise ModelFormatError("missing 'agents' line")
    if worlds is None or not worlds:
        raise ModelFormatError("missing or empty 'worlds' line")
    world_set = set(worlds)

    def check_world(w: str, lineno: int) -> str:
        if w not in world_set:
            raise ModelFormatError(f"unknown world {w!r}", lineno)
        return w

    def check_known_agent(a: str, lineno: int) -> str:
        if a not in agents:
            raise ModelFormatError(f"unknown agent {a!r}", lineno)
        return a

    val: dict[str, set[str]] = defaultdict(set)
    for atom, ws in atom_worlds.items():
        for w in ws:
            val[check_world(w, atom_lines[atom])].add(atom)

    depth: dict[tuple[str, str], int] = {}
    for a, (lineno, rest) in depth_lines.items():
        check_known_agent(a, lineno)
        for item in rest.split():
            m = _ASSIGN.match(item)
            if m is None:
                raise ModelFormatError(f"bad depth entry {item!r}", lineno)
            value = int(m.group(2))
            if value < 0 and not signed:
                raise ModelFormatError(f"negative depth {value} needs 'depths signed'", lineno)
            if m.group(1) == "*":
                for w in worlds:
                    depth[(a, w)] = value
            else:
                depth[(a, check_world(m.group(1), lineno))] = value
    for a in agents:
        missing = [w for w in worlds if (a, w) not in depth]
        if missing:
            raise ModelFormatError(f"missing depth for agent {a!r} at {', '.join(missing)}")

    generators: dict[str, list[Pair]] = {a: [] for a in agents}
    for a, (lineno, rest) in rel_lines.items():
        check_known_agent(a, lineno)
        for item in rest.split():
            m = _EDGE.match(item)
            if m is None:
                raise ModelFormatError(f"bad relation entry {item!r}", lineno)
            s, op, t = check_world(m.group(1), lineno), m.group(2), check_world(m.group(3), lineno)
            if op == ">":
                if kind is RelationKind.EQUIVALENCE:
                    raise ModelFormatError("directed pairs need 'kind reflexive'", lineno)
                generators[a].append((s, t))
            else:
                generators[a] += [(s, t), (t, s)]

    atoms = declared_atoms if declared_atoms is not None else list(atom_worlds)
    m = build(worlds, agents, generators, val, depth, kind, atoms)
    if signed:
        m = KripkeModel(m.worlds, m.agents, m.rel, m.val, m.depth, m.kind, m.atoms, True)
    return m


def load_file(path: str) -> KripkeModel:
    """Load a model file; ``builtin:<name>`` reads one of the bundled models."""
    if path.startswith("builtin:"):
        name = path.split(":", 1)[1]
        try:
            text = resources.files("depthlogic.data").joinpath(f"{name}.km").read_text()
        except FileNotFoundError:
            raise ModelFormatError(f"no bundled model named {name!r}") from None
        return load(text)
    with open(path) as fh:
        return load(fh.read())


def _depth_clause(m: KripkeModel, a: str) -> str:
    values = {m.depth[(a, w)] for w in m.worlds}
    if len(values) == 1:
        return f"*={values.pop()}"
    return " ".join(f"{w}={m.depth[(a, w)]}" for w in m.worlds)


def _rel_clause(m: KripkeModel, a: str) -> str:
    if m.kind is RelationKind.EQUIVALENCE:
        items = []
        for cls in m.classes(a):
            members = [w for w in m.worlds if w in cls]
            items += [f"{s}-{t}" for s, t in zip(members, members[1:])]
        return " ".join(items)
    order = {w: i for i, w in enumerate(m.worlds)}
    pairs = sorted((p for p in m.rel[a] if p[0] != p[1]), key=lambda p: (order[p[0]], order[p[1]]))
    items = []
    for s, t in pairs:
        if (t, s) not in m.rel[a]:
            items.append(f"{s}>{t}")
        elif order[s] < order[t]:
            items.append(f"{s}-{t}")
    return " ".join(items)


def export_native(m: KripkeModel) -> str:
    lines = [f"kind {m.kind.value}"]
    if m.signed_depths:
        lines.append("depths signed")
    lines.append("agents " + " ".join(m.agents))
    lines.append("worlds " + " ".join(m.worlds))
    if m.atoms:
        lines.append("atoms " + " ".join(m.atoms))
    for p in m.atoms:
        lines.append(f"atom {p}: " + " ".join(w for w in m.worlds if p in m.val[w]))
    for a in m.agents:
        lines.append(f"depth {a}: {_depth_clause(m, a)}")
    for a in m.agents:
        lines.append(f"rel {a}: {_rel_clause(m, a)}".rstrip())
    return "\n".join(lines) + "\n"


def _dot_id(*parts: str) -> str:
    return '"' + "/".join(parts).replace('"', r"\"") + '"'


def _is_cross_copy(s: str, t: str) -> bool:
    return s[:2] in ("0:", "1:") and t[:2] in ("0:", "1:") and s[:2] != t[:2] and s[2:] == t[2:]


def export_dot(m: KripkeModel) -> str:
    lines = ["digraph model {", "  node [shape=record];"]
    for a in m.agents:
        lines.append(f"  subgraph cluster_{a} {{")
        lines.append(f'    label="agent {a}";')
        for w in m.worlds:
            atoms = ",".join(sorted(m.val[w])) or "-"
            depths = ",".join(f"{b}={m.depth[(b, w)]}" for b in m.agents)
            lines.append(f'    {_dot_id(a, w)} [label="{w} | {atoms} | {depths}"];')
        pairs = m.rel[a]
        for s, t in sorted(pairs, key=lambda p: (m.worlds.index(p[0]), m.worlds.index(p[1]))):
            if s == t:
                continue
            symmetric = (t, s) in pairs
            if symmetric and m.worlds.index(t) < m.worlds.index(s):
                continue
            attrs = ["dir=none"] if symmetric else []
            if _is_cross_copy(s, t):
                attrs.append("style=dashed")
            suffix = f" [{', '.join(attrs)}]" if attrs else ""
            lines.append(f"    {_dot_id(a, s)} -> {_dot_id(a, t)}{suffix};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(m: KripkeModel, format: str = "native") -> str:
    if format == "native":
        return export_native(m)
    if format == "dot":
        return export_dot(m)
    raise ValueError(f"unknown export format {format!r}")


# -- checks -----------------------------------------------------------------


def validate(m: KripkeModel) -> list[str]:
    """Every violated model invariant, as readable messages; empty when valid."""
    problems = []
    ws = m.world_set
    if len(ws) != len(m.worlds):
        problems.append("duplicate world names")
    for a in m.agents:
        pairs = m.rel.get(a)
        if pairs is None:
            problems.append(f"agent {a}: no relation")
            continue
        for s, t in sorted(pairs):
            if s not in ws or t not in ws:
                problems.append(f"agent {a}: pair ({s},{t}) mentions an unknown world")
        for w in m.worlds:
            if (w, w) not in pairs:
                problems.append(f"agent {a}: missing reflexive pair ({w},{w})")
        if m.kind is RelationKind.EQUIVALENCE:
            for s, t in sorted(pairs):
                if (t, s) not in pairs:
                    problems.append(f"agent {a}: symmetry violated, ({s},{t}) without ({t},{s})")
            succ = defaultdict(set)
            for s, t in pairs:
                succ[s].add(t)
            for s, t in sorted(pairs):
                for u in sorted(succ[t] - succ[s]):
                    problems.append(f"agent {a}: transitivity violated, ({s},{t}) and ({t},{u}) without ({s},{u})")
        for w in m.worlds:
            d = m.depth.get((a, w))
            if d is None:
                problems.append(f"agent {a}: no depth at {w}")
            elif not INT64_MIN <= d <= INT64_MAX:
                problems.append(f"agent {a}: depth at {w} overflows 64 bits")
            elif d < 0 and not m.signed_depths:
                problems.append(f"agent {a}: negative depth {d} at {w}")
    for w in m.worlds:
        if w not in m.val:
            problems.append(f"world {w}: no valuation")
    return problems


def is_unambiguous(m: KripkeModel) -> bool:
    """Whether every agent has the same depth at all worlds it cannot tell apart."""
    return all(m.depth[(a, s)] == m.depth[(a, t)] for a in m.agents for s, t in m.rel[a])


def size_norm(m: KripkeModel) -> int:
    return len(m.worlds) + sum(len(m.rel[a]) for a in m.agents)
