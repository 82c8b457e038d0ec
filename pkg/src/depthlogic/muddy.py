"""Muddy children models with agent depths, and the experiments run on them.

World names are bit strings: character ``i`` is ``1`` when child ``i`` is
muddy.  The all-clean world is left out, so the father's opening
announcement is already accounted for.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from . import kernel
from .formula import (
    And,
    AtLeastDepth,
    Atom,
    Diamond,
    Formula,
    Implies,
    Knows,
    Not,
    TOP,
    parse,
)
from .model import KripkeModel, build
from .semantics import Semantics

MAX_CHILDREN = 6


@dataclass(frozen=True)
class Constant:
    """Depth ``per_agent[i]`` for child ``i`` in every world."""

    per_agent: tuple[int, ...]


@dataclass(frozen=True)
class PerWorld:
    mapping: Mapping[tuple[str, str], int] = field(hash=False)


DepthSpec = Union[Constant, PerWorld]


@dataclass(frozen=True)
class MuddyInstance:
    n: int
    k: int
    model: KripkeModel
    true_world: str


def worlds(n: int) -> list[str]:
    out = []
    for v in range(1, 2**n):
        out.append("".join("1" if v >> i & 1 else "0" for i in range(n)))
    return out


def _flip(w: str, i: int) -> str:
    return w[:i] + ("0" if w[i] == "1" else "1") + w[i + 1:]


def muddy_model(n: int, k: int, depths: DepthSpec, max_children: int = MAX_CHILDREN) -> MuddyInstance:
    if not 1 <= k <= n <= max_children:
        raise ValueError(f"need 1 <= k <= n <= {max_children}, got n={n}, k={k}")
    ws = worlds(n)
    present = set(ws)
    agents = [str(i) for i in range(n)]
    generators = {
        str(i): [(w, _flip(w, i)) for w in ws if _flip(w, i) in present]
        for i in range(n)
    }
    val = {w: {f"m{i}" for i in range(n) if w[i] == "1"} for w in ws}
    if isinstance(depths, Constant):
        if len(depths.per_agent) != n:
            raise ValueError(f"constant depth spec needs {n} values, got {len(depths.per_agent)}")
        depth = {(a, w): depths.per_agent[i] for i, a in enumerate(agents) for w in ws}
    else:
        depth = dict(depths.mapping)
        missing = [(a, w) for a in agents for w in ws if (a, w) not in depth]
        if missing:
            raise ValueError(f"depth spec misses agent {missing[0][0]} at world {missing[0][1]}")
    m = build(ws, agents, generators, val, depth, atoms=[f"m{i}" for i in range(n)])
    return MuddyInstance(n, k, m, "1" * k + "0" * (n - k))


def phi_chain(k: int) -> Formula:
    """Children k-1 down to 1 each announce ignorance, after which child 0 knows it is muddy."""
    if k < 1:
        raise ValueError("k must be at least 1")
    f: Formula = Knows("0", Atom("m0"))
    for i in range(1, k):
        f = Diamond(Not(Knows(str(i), Atom(f"m{i}"))), f)
    return f


def depth_ladder(k: int) -> Formula:
    """Nested knowledge that child i has depth at least k-1-i."""
    if k < 1:
        raise ValueError("k must be at least 1")
    inner: Formula = Knows(str(k - 1), AtLeastDepth(str(k - 1), 0))
    for i in range(k - 2, -1, -1):
        inner = Knows(str(i), And(AtLeastDepth(str(i), k - 1 - i), inner))
    return inner


def parse_depths(text: str, n: int) -> Constant:
    """``"0=2,1=1,2=0"`` style constant spec."""
    values = {}
    for item in text.split(","):
        agent, _, value = item.partition("=")
        values[int(agent)] = int(value)
    if sorted(values) != list(range(n)):
        raise ValueError(f"depth spec must give every child 0..{n - 1}")
    return Constant(tuple(values[i] for i in range(n)))


# -- experiments -------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    expected: bool
    got: bool

    @property
    def ok(self) -> bool:
        return self.expected == self.got


def holds(inst: MuddyInstance, f: Formula, sem: Semantics, world: str | None = None) -> bool:
    return (world or inst.true_world) in kernel.truth_set(inst.model, f, sem)


def ladder_family(k: int, seed: int = 0, perturbed: int = 30) -> list[DepthSpec]:
    """Depth specs satisfying the ladder at the all-muddy world.

    Constant specs with each child between its minimum ``k-1-i`` and two
    above it, plus randomly perturbed per-world variants that keep the ladder.
    """
    rng = random.Random(seed)
    constant = [
        Constant(values)
        for values in itertools.product(*[range(k - 1 - i, k + 2 - i) for i in range(k)])
    ]
    ladder = depth_ladder(k)
    out: list[DepthSpec] = list(constant)
    ws = worlds(k)
    tries = 0
    while len(out) < len(constant) + perturbed and tries < 50 * perturbed:
        tries += 1
        base = rng.choice(constant).per_agent
        mapping = {}
        for i in range(k):
            for w in ws:
                mapping[(str(i), w)] = rng.randint(0, k + 1) if rng.random() < 0.35 else base[i]
        spec = PerWorld(mapping)
        if holds(muddy_model(k, k, spec), ladder, Semantics.DPAL):
            out.append(spec)
    return out


def upper_bound(k: int, specs: Sequence[DepthSpec] | None = None, sems=tuple(Semantics)) -> list[tuple[DepthSpec, Semantics, bool, bool]]:
    """``(spec, semantics, ladder holds, implication holds)`` for every spec and semantics."""
    if specs is None:
        specs = ladder_family(k)
    target = Implies(depth_ladder(k), phi_chain(k))
    ladder = depth_ladder(k)
    rows = []
    for spec in specs:
        inst = muddy_model(k, k, spec)
        for sem in sems:
            rows.append((spec, sem, holds(inst, ladder, sem), holds(inst, target, sem)))
    return rows


@dataclass(frozen=True)
class LowerBoundReport:
    n: int
    k: int
    depth_functions: int
    classes_checked: int
    failures: int
    counterexample: KripkeModel | None
    world: str | None = None  # where the counterexample fails

    @property
    def ok(self) -> bool:
        return self.failures == 0


def lower_bound(n: int, k: int, at: str = "every", unambiguous_only: bool = False) -> LowerBoundReport:
    """Check ``phi_k -> K[0] P[0,k-1]`` for every depth function into [0, k].

    ``at`` is ``"every"`` (all worlds) or ``"true"`` (the all-muddy-first-k
    world only).  Depths are swept by class: two values on the same side of
    every cut point the formula can observe give identical truth values, so
    one representative per class covers the whole range.
    """
    if at not in ("every", "true"):
        raise ValueError("at must be 'every' or 'true'")
    f = Implies(phi_chain(k), Knows("0", AtLeastDepth("0", k - 1)))
    inst = muddy_model(n, k, Constant((0,) * n))
    m = inst.model
    prog = kernel.compile_formula(f, agents=m.agents, atoms=m.atoms)
    _, vals, _, _ = kernel.model_arrays(m, prog)
    frame_prog = kernel.compile_formula(TOP, agents=prog.agents, atoms=prog.atoms)
    _, _, _, succ = kernel.model_arrays(m, frame_prog)
    cuts = kernel.depth_thresholds(f)
    reps = [kernel.representatives(cuts.get(a, ()), k) for a in prog.agents]
    nw = len(m.worlds)
    target = (1 << nw) - 1 if at == "every" else 1 << m.worlds.index(inst.true_world)
    out = kernel.sweep(prog, Semantics.DPAL, nw, [succ], [vals], reps, mode=0, target=target,
                       unambiguous_only=unambiguous_only, stop_first=False)
    counter = where = None
    if out["first"] is not None:
        _, _, digits, mask = out["first"]
        depth = {}
        for ai, a in enumerate(prog.agents):
            for wi, w in enumerate(m.worlds):
                depth[(a, w)] = reps[ai][digits[ai * nw + wi]]
        counter = muddy_model(n, k, PerWorld(depth)).model
        where = next(w for i, w in enumerate(m.worlds) if target >> i & 1 and not mask >> i & 1)
    return LowerBoundReport(n, k, (k + 1) ** (n * nw), out["checked"], out["hits"], counter, where)


AMNESIA = "<~K[2]m2><~K[1]m1> ~K[2]true"
LEAKAGE = "<K[1]~K[2]m2> K[1]K[0]m0"


def amnesia_and_leakage() -> list[Check]:
    """The two showcase formulas on three muddy children of depths 2, 1, 0."""
    inst = muddy_model(3, 3, Constant((2, 1, 0)))
    out = []
    for text, truthy in ((AMNESIA, Semantics.EDPAL), (LEAKAGE, Semantics.ADPAL)):
        f = parse(text)
        for sem in Semantics:
            out.append(Check(f"{text} [{sem.value}]", sem is truthy, holds(inst, f, sem)))
    return out
