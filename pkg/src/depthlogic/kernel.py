"""Formula compilation and dispatch to the bitset kernels.

The compiled extension is used when it imports; setting ``DEPTHLOGIC_PURE``
in the environment forces the pure-Python backend.  Queries whose updated
models outgrow 64 worlds are transparently rerun on the pure-Python backend.
"""

from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass

from . import _pykernel
from .formula import (
    TOP,
    And,
    Announce,
    AtLeastDepth,
    Atom,
    ExactDepth,
    Formula,
    Knows,
    KnowsInf,
    Not,
    agents_of,
    atoms_of,
    children,
    modal_depth,
)
from .model import KripkeModel
from .semantics import STATS, Semantics, check_kind

_backend = _pykernel
BACKEND = "python"
if not os.environ.get("DEPTHLOGIC_PURE"):
    try:
        from . import _ckernel

        _backend = _ckernel
        BACKEND = "compiled"
    except ImportError:  # extension not built
        pass

SEM_CODE = {Semantics.DPAL: 0, Semantics.EDPAL: 1, Semantics.ADPAL: 2}
TRUE, FALSE, ATOM, EXACT, ATLEAST, NOT, AND, K, KI, ANN = range(10)


def backend_module(name: str | None = None):
    if name is None:
        return _backend
    if name == "python":
        return _pykernel
    if name == "compiled":
        from . import _ckernel

        return _ckernel
    raise ValueError(f"unknown backend {name!r}")


@dataclass(frozen=True)
class Program:
    """A formula as flat node arrays in post-order; shared subformulas appear once."""

    agents: tuple[str, ...]
    atoms: tuple[str, ...]
    op: tuple[int, ...]
    agent: tuple[int, ...]
    arg: tuple[int, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]
    root: int

    @property
    def arrays(self):
        return (self.op, self.agent, self.arg, self.left, self.right)


def compile_formula(f: Formula, agents=None, atoms=None) -> Program:
    agents = tuple(sorted(agents_of(f))) if agents is None else tuple(agents)
    atoms = tuple(sorted(atoms_of(f))) if atoms is None else tuple(atoms)
    aidx = {a: i for i, a in enumerate(agents)}
    pidx = {p: i for i, p in enumerate(atoms)}
    index: dict[Formula, int] = {}
    rows: list[tuple[int, int, int, int, int]] = []

    def agent_of(g) -> int:
        try:
            return aidx[g.agent]
        except KeyError:
            raise ValueError(f"agent {g.agent!r} is not in the signature") from None

    def emit(g: Formula) -> int:
        hit = index.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            if g == TOP:
                row = (TRUE, 0, 0, -1, -1)
            elif g.name in pidx:
                row = (ATOM, 0, pidx[g.name], -1, -1)
            else:
                row = (FALSE, 0, 0, -1, -1)
        elif isinstance(g, ExactDepth):
            row = (EXACT, agent_of(g), g.d, -1, -1)
        elif isinstance(g, AtLeastDepth):
            row = (ATLEAST, agent_of(g), g.d, -1, -1)
        elif isinstance(g, Not):
            row = (NOT, 0, 0, emit(g.sub), -1)
        elif isinstance(g, And):
            row = (AND, 0, 0, emit(g.left), emit(g.right))
        elif isinstance(g, Knows):
            row = (K, agent_of(g), modal_depth(g.sub), emit(g.sub), -1)
        elif isinstance(g, KnowsInf):
            row = (KI, agent_of(g), 0, emit(g.sub), -1)
        elif isinstance(g, Announce):
            row = (ANN, 0, modal_depth(g.announced), emit(g.announced), emit(g.body))
        else:
            raise TypeError(f"not a formula: {g!r}")
        rows.append(row)
        index[g] = len(rows) - 1
        return len(rows) - 1

    root = emit(f)
    cols = list(zip(*rows))
    return Program(agents, atoms, *(tuple(c) for c in cols), root)


# -- depth classes --------------------------------------------------------------


def depth_thresholds(f: Formula) -> dict[str, set[int]]:
    """Per agent, the original-depth cut points that can change the truth of ``f``.

    A comparison ``depth >= c`` made under enclosing announcements of depths
    k1..kj reads the original depth through conditional (or unconditional)
    decrements, so its truth depends only on ``depth >= c + S`` for the
    subset sums S of those k.  Update comparisons for an agent are counted
    only when the agent occurs in the announcement body, since otherwise its
    post-update relation and depth are never read.
    """
    out: dict[str, set[int]] = defaultdict(set)

    def go(g: Formula, sums: frozenset[int]) -> None:
        if isinstance(g, Knows):
            need = modal_depth(g.sub)
            out[g.agent].update(need + s for s in sums)
        elif isinstance(g, AtLeastDepth):
            out[g.agent].update(g.d + s for s in sums)
        elif isinstance(g, ExactDepth):
            out[g.agent].update(g.d + s for s in sums)
            out[g.agent].update(g.d + 1 + s for s in sums)
        elif isinstance(g, Announce):
            k = modal_depth(g.announced)
            for a in agents_of(g.body):
                out[a].update(k + s for s in sums)
            go(g.announced, sums)
            go(g.body, sums | {s + k for s in sums})
            return
        for c in children(g):
            go(c, sums)

    go(f, frozenset({0}))
    for a in agents_of(f):
        out.setdefault(a, set())
    return dict(out)


def representatives(thresholds, max_depth: int | None) -> list[int]:
    """Smallest member of every depth class (cut at ``thresholds``) inside ``[0, max_depth]``."""
    points = {0}
    for t in thresholds:
        if t > 0 and (max_depth is None or t <= max_depth):
            points.add(t)
    return sorted(points)


# -- single-model evaluation ------------------------------------------------------


def model_arrays(m: KripkeModel, prog: Program):
    pos = {w: i for i, w in enumerate(m.worlds)}
    vals = []
    for p in prog.atoms:
        mask = 0
        for w in m.worlds:
            if p in m.val[w]:
                mask |= 1 << pos[w]
        vals.append(mask)
    depth = [[m.depth[(a, w)] for w in m.worlds] for a in prog.agents]
    succ = []
    for a in prog.agents:
        row = []
        for w in m.worlds:
            mask = 0
            for t in m.successors[a][w]:
                mask |= 1 << pos[t]
            row.append(mask)
        succ.append(row)
    return len(m.worlds), vals, depth, succ


def truth_set(m: KripkeModel, f: Formula, sem: Semantics = Semantics.DPAL, backend: str | None = None) -> frozenset[str]:
    """Kernel counterpart of ``semantics.truth_set``."""
    check_kind(m, sem)
    missing = agents_of(f) - set(m.agents)
    if missing:
        raise ValueError(f"unknown agent {sorted(missing)[0]!r}")
    prog = compile_formula(f, agents=m.agents, atoms=m.atoms or sorted(set().union(*m.val.values())))
    n, vals, depth, succ = model_arrays(m, prog)
    mod = backend_module(backend)
    mask, stats, overflow = mod.evaluate(prog.arrays, prog.root, SEM_CODE[sem], n, vals, depth, succ)
    if overflow:
        mask, stats, _ = _pykernel.evaluate(prog.arrays, prog.root, SEM_CODE[sem], n, vals, depth, succ)
    STATS.absorb(*stats)
    return frozenset(w for i, w in enumerate(m.worlds) if mask >> i & 1)


def sweep(prog: Program, sem: Semantics, n: int, frames, vals, reps, mode: int = 0, target: int | None = None,
          unambiguous_only: bool = False, stop_first: bool = True, backend: str | None = None) -> dict:
    """Run the kernel sweep; see ``_pykernel.sweep`` for the argument layout."""
    if target is None:
        target = (1 << n) - 1
    mod = backend_module(backend)
    args = (prog.arrays, prog.root, SEM_CODE[sem], n, frames, vals, reps, mode, target, unambiguous_only, stop_first)
    out = mod.sweep(*args)
    if out["overflow"]:
        out = _pykernel.sweep(*args)
    STATS.absorb(*out["stats"])
    return out
