"""Exhaustive small-model sweeps for axiom schemas and named properties.

Schemas are instantiated from small fixed placeholder pools and checked on
every model up to the given bounds.  The sweeps run on the bitset kernel
with three reductions that do not change the verdict: only the agents and
atoms of the instance are modelled, depths are taken one representative
per class of ``kernel.depth_thresholds``, and frames are taken up to
renaming of worlds (valuations and depths are still enumerated in full).
Every countermodel is re-checked with the reference evaluator.
"""

from __future__ import annotations

import inspect
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from . import kernel
from .formula import (
    H,
    HINF,
    LINF,
    L,
    And,
    Announce,
    AtLeastDepth,
    ExactDepth,
    Formula,
    Fragment,
    Iff,
    Implies,
    Knows,
    KnowsInf,
    Logic,
    Not,
    Or,
    agents_of,
    atoms_of,
    disj,
    f_phi,
    modal_depth,
    parse,
)
from .model import KripkeModel, RelationKind, build
from .satisfiability import UNSAT, Sat, Unsat
from .semantics import Semantics, eval as evaluate

MAX_AGENTS = 2
MAX_ATOMS = 2


@dataclass(frozen=True)
class ModelBounds:
    max_worlds: int
    agents: tuple[str, ...] = ("a", "b")
    atoms: tuple[str, ...] = ("p", "q")
    max_depth: int = 3
    min_worlds: int = 1

    def __post_init__(self):
        if self.max_worlds < 1 or self.min_worlds < 1 or self.min_worlds > self.max_worlds:
            raise ValueError(f"bad world range [{self.min_worlds}, {self.max_worlds}]")
        if self.max_depth < 0:
            raise ValueError("max_depth must be non-negative")
        if not self.agents:
            raise ValueError("bounds need at least one agent")
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "atoms", tuple(self.atoms))

    @property
    def default_sized(self) -> bool:
        return (self.max_worlds <= 4 and len(self.agents) <= MAX_AGENTS
                and len(self.atoms) <= MAX_ATOMS and self.max_depth <= 3)


DEFAULT_BOUNDS = ModelBounds(3)


# -- frames ----------------------------------------------------------------------


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings: ``block[i]`` is the block index of world i."""
    if n == 0:
        yield ()
        return

    def grow(prefix: list[int], top: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            prefix.append(b)
            yield from grow(prefix, max(top, b))
            prefix.pop()

    yield from grow([0], 0)


def _partition_masks(blocks: tuple[int, ...]) -> tuple[int, ...]:
    mask_of: dict[int, int] = {}
    for w, b in enumerate(blocks):
        mask_of[b] = mask_of.get(b, 0) | 1 << w
    return tuple(mask_of[b] for b in blocks)


def _reflexive_relations(n: int) -> Iterator[tuple[int, ...]]:
    off = [(s, t) for s in range(n) for t in range(n) if s != t]
    for bits in range(2 ** len(off)):
        row = [1 << w for w in range(n)]
        for i, (s, t) in enumerate(off):
            if bits >> i & 1:
                row[s] |= 1 << t
        yield tuple(row)


def _relations(n: int, kind: RelationKind) -> list[tuple[int, ...]]:
    if kind is RelationKind.EQUIVALENCE:
        return [_partition_masks(p) for p in set_partitions(n)]
    return list(_reflexive_relations(n))


def _permute(row: tuple[int, ...], perm: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(row)
    for w, mask in enumerate(row):
        image = 0
        for t in range(len(row)):
            if mask >> t & 1:
                image |= 1 << perm[t]
        out[perm[w]] = image
    return tuple(out)


def _connected(frame: tuple[tuple[int, ...], ...], n: int) -> bool:
    # relations may be directed, so edges are followed both ways
    adj = [0] * n
    for row in frame:
        for s in range(n):
            adj[s] |= row[s]
            for t in range(n):
                if row[s] >> t & 1:
                    adj[t] |= 1 << s
    seen, todo = 1, [0]
    while todo:
        w = todo.pop()
        fresh = adj[w] & ~seen
        seen |= fresh
        todo += [t for t in range(n) if fresh >> t & 1]
    return seen == (1 << n) - 1


@lru_cache(maxsize=None)
def frames(n: int, nagents: int, kind: RelationKind = RelationKind.EQUIVALENCE,
           up_to_iso: bool = True, connected: bool = False) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Per-agent successor masks for every frame on ``n`` worlds.

    With ``up_to_iso`` one frame per world-renaming class is kept (the
    lexicographically least image).
    """
    rels = _relations(n, kind)
    perms = list(itertools.permutations(range(n)))
    out = []
    seen = set()
    for frame in itertools.product(rels, repeat=nagents):
        if connected and nagents and not _connected(frame, n):
            continue
        if connected and not nagents and n > 1:
            continue
        if up_to_iso:
            canon = min(tuple(_permute(row, p) for row in frame) for p in perms)
            if canon in seen:
                continue
            seen.add(canon)
            frame = canon
        out.append(frame)
    return tuple(out)


def valuations(n: int, natoms: int) -> list[list[int]]:
    return [list(v) for v in itertools.product(range(2 ** n), repeat=natoms)]


def _world_names(n: int) -> list[str]:
    return [f"w{i}" for i in range(n)]


def _model_from(n, frame, val, depth_rows, agents, atoms, kind) -> KripkeModel:
    names = _world_names(n)
    generators = {
        a: [(names[s], names[t]) for s in range(n) for t in range(n) if row[s] >> t & 1]
        for a, row in zip(agents, frame)
    }
    v = {names[w]: {p for p, mask in zip(atoms, val) if mask >> w & 1} for w in range(n)}
    depth = {(a, names[w]): row[w] for a, row in zip(agents, depth_rows) for w in range(n)}
    return build(names, agents, generators, v, depth, kind, atoms)


def enumerate_models(bounds: ModelBounds, kind: RelationKind = RelationKind.EQUIVALENCE) -> Iterator[KripkeModel]:
    """Every model within ``bounds``, each exactly once (worlds named w0, w1, ...)."""
    agents, atoms = bounds.agents, bounds.atoms
    for n in range(bounds.min_worlds, bounds.max_worlds + 1):
        all_frames = frames(n, len(agents), kind, up_to_iso=False)
        depth_rows = list(itertools.product(range(bounds.max_depth + 1), repeat=n))
        for frame in all_frames:
            for val in valuations(n, len(atoms)):
                for rows in itertools.product(depth_rows, repeat=len(agents)):
                    yield _model_from(n, frame, val, rows, agents, atoms, kind)


def count_models(bounds: ModelBounds, kind: RelationKind = RelationKind.EQUIVALENCE) -> int:
    """Closed-form size of ``enumerate_models`` (relations x valuations x depth maps)."""
    total = 0
    for n in range(bounds.min_worlds, bounds.max_worlds + 1):
        rel = len(_relations(n, kind)) ** len(bounds.agents)
        total += rel * 2 ** (n * len(bounds.atoms)) * (bounds.max_depth + 1) ** (n * len(bounds.agents))
    return total


# -- schemas ---------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomSchema:
    """A named formula template.

    ``builder`` takes keyword arguments: the agent ``a``, formula
    placeholders and integer depth parameters, as listed in
    ``placeholders`` and ``params``.  ``depth_range`` maps ``max_depth`` to
    the parameter tuples a sweep instantiates.
    """

    name: str
    builder: Callable[..., Formula]
    source: str
    placeholders: tuple[str, ...] = ()
    params: tuple[str, ...] = ()
    depth_range: Callable[[int], Iterable[tuple[int, ...]]] | None = field(default=None, compare=False)
    pool: str | None = None  # named pool overriding the group's default for every placeholder

    @property
    def arity(self) -> tuple[str, ...]:
        return ("a",) + self.placeholders + self.params


def instantiate(schema: AxiomSchema, bindings: Mapping[str, object]) -> Formula:
    expected = set(schema.arity)
    got = set(bindings)
    if got != expected:
        missing = sorted(expected - got)
        extra = sorted(got - expected)
        raise ValueError(f"{schema.name}: arity mismatch (missing {missing}, unexpected {extra})")
    for name in schema.placeholders:
        if isinstance(bindings[name], str):
            bindings = {**bindings, name: parse(bindings[name])}
    return schema.builder(**bindings)


def _P(a: str, d: int) -> Formula:
    return AtLeastDepth(a, d)


def _E(a: str, d: int) -> Formula:
    return ExactDepth(a, d)


def _one(lo: int, hi_extra: int = 1):
    return lambda m: [(d,) for d in range(lo, m + hi_extra + 1)]


def _pairs(m: int):
    return [(x, y) for x in range(m + 2) for y in range(m + 2) if x != y]


def _signed(m: int):
    return [(d,) for d in range(-m, m + 1)]


def _schema(name, source, builder, params=(), depth_range=None, pool=None) -> AxiomSchema:
    names = tuple(inspect.signature(builder).parameters)
    placeholders = tuple(n for n in names if n != "a" and n not in params)
    return AxiomSchema(name, builder, source, placeholders, tuple(params), depth_range, pool)


def _dpal_depth_adjustment(a, phi, d):
    k = modal_depth(phi)
    return Iff(Announce(phi, _E(a, d)),
               Implies(phi, Or(And(_P(a, k), _E(a, d + k)), And(Not(_P(a, k)), _E(a, d)))))


SCHEMAS: dict[str, AxiomSchema] = {s.name: s for s in [
    # bounded knowledge
    _schema("tautology", "dbel", lambda a, phi: Implies(phi, phi)),
    _schema("deduction", "dbel", lambda a, phi, psi: Implies(
        And(Knows(a, phi), Knows(a, Implies(phi, psi))), Knows(a, psi))),
    _schema("truth", "dbel", lambda a, phi: Implies(Knows(a, phi), phi)),
    _schema("positive_introspection", "dbel", lambda a, phi: Implies(
        And(Knows(a, phi), _P(a, modal_depth(phi) + 1)),
        Knows(a, Implies(_P(a, modal_depth(phi)), Knows(a, phi))))),
    _schema("negative_introspection", "dbel", lambda a, phi: Implies(
        And(Not(Knows(a, phi)), _P(a, modal_depth(phi) + 1)), Knows(a, Not(Knows(a, phi))))),
    _schema("depth_monotonicity", "dbel", lambda a, d: Implies(_P(a, d), _P(a, d - 1)), ("d",), _one(1)),
    _schema("exact_depths", "dbel", lambda a, d: Iff(_P(a, d), Not(disj(*(_E(a, i) for i in range(d))))),
            ("d",), _one(0)),
    _schema("unique_depth", "dbel", lambda a, d1, d2: Not(And(_E(a, d1), _E(a, d2))), ("d1", "d2"), _pairs),
    _schema("depth_deduction", "dbel", lambda a, phi: Implies(Knows(a, phi), _P(a, modal_depth(phi)))),
    _schema("necessitation", "dbel", lambda a, phi: Implies(_P(a, modal_depth(phi)), Knows(a, phi)),
            pool="tautologies"),
    # unbounded knowledge
    _schema("deduction_inf", "dbel_inf", lambda a, phi, psi: Implies(
        And(KnowsInf(a, phi), KnowsInf(a, Implies(phi, psi))), KnowsInf(a, psi))),
    _schema("truth_inf", "dbel_inf", lambda a, phi: Implies(KnowsInf(a, phi), phi)),
    _schema("positive_introspection_inf", "dbel_inf", lambda a, phi: Implies(
        KnowsInf(a, phi), KnowsInf(a, KnowsInf(a, phi)))),
    _schema("negative_introspection_inf", "dbel_inf", lambda a, phi: Implies(
        Not(KnowsInf(a, phi)), KnowsInf(a, Not(KnowsInf(a, phi))))),
    _schema("bounded_knowledge", "dbel_inf", lambda a, phi: Iff(
        Knows(a, phi), And(_P(a, modal_depth(phi)), KnowsInf(a, phi)))),
    _schema("necessitation_inf", "dbel_inf", lambda a, phi: KnowsInf(a, phi), pool="tautologies_inf"),
    # announcements, eager updates
    _schema("atomic_permanence", "edpal", lambda a, phi, p: Iff(Announce(phi, p), Implies(phi, p))),
    _schema("depth_adjustment", "edpal", lambda a, phi, d: Iff(
        Announce(phi, _E(a, d)), Implies(phi, _E(a, modal_depth(phi) + d))), ("d",), _signed),
    _schema("negation_announcement", "edpal", lambda a, phi, psi: Iff(
        Announce(phi, Not(psi)), Implies(phi, Not(Announce(phi, psi))))),
    _schema("conjunction_announcement", "edpal", lambda a, phi, psi, chi: Iff(
        Announce(phi, And(psi, chi)), And(Announce(phi, psi), Announce(phi, chi)))),
    _schema("knowledge_announcement", "edpal", lambda a, phi, psi: Iff(
        Announce(phi, Implies(_P(a, modal_depth(psi)), Knows(a, psi))),
        Implies(phi, Implies(_P(a, modal_depth(phi) + modal_depth(psi)), Knows(a, Announce(phi, psi)))))),
    _schema("knowledge_announcement_inf", "edpal_inf", lambda a, phi, psi: Iff(
        Announce(phi, KnowsInf(a, psi)), Implies(phi, KnowsInf(a, Announce(phi, psi))))),
    _schema("announcement_composition", "edpal", lambda a, phi, psi, chi: Iff(
        Announce(phi, Announce(psi, chi)), Announce(And(phi, Announce(phi, psi)), chi))),
    # announcements, copying updates
    _schema("depth_adjustment_dpal", "dpal", _dpal_depth_adjustment, ("d",), _one(0, 0)),
    _schema("kp_prime", "dpal", lambda a, phi, psi: Implies(
        f_phi(phi, Knows(a, psi)), Iff(Announce(phi, Knows(a, psi)), Implies(phi, Knows(a, psi))))),
    _schema("kp_prime_forward", "dpal", lambda a, phi, psi: Implies(
        f_phi(phi, Knows(a, psi)), Implies(Announce(phi, Knows(a, psi)), Implies(phi, Knows(a, psi))))),
    _schema("ta_prime", "dpal", lambda a, phi, psi: Implies(
        KnowsInf(a, Implies(phi, _P(a, modal_depth(phi)))),
        Iff(Announce(phi, Knows(a, psi)), Implies(phi, Knows(a, Announce(phi, psi)))))),
    # named properties
    _schema("kp", "property", lambda a, phi, psi: Implies(
        Not(_P(a, modal_depth(phi))), Iff(Announce(phi, Knows(a, psi)), Implies(phi, Knows(a, psi))))),
    _schema("kp_forward", "property", lambda a, phi, psi: Implies(
        Not(_P(a, modal_depth(phi))), Implies(Announce(phi, Knows(a, psi)), Implies(phi, Knows(a, psi))))),
    _schema("kp_backward", "property", lambda a, phi, psi: Implies(
        Not(_P(a, modal_depth(phi))), Implies(Implies(phi, Knows(a, psi)), Announce(phi, Knows(a, psi))))),
    _schema("ta", "property", lambda a, phi, psi: Implies(
        _P(a, modal_depth(phi)), Iff(Announce(phi, Knows(a, psi)), Implies(phi, Knows(a, Announce(phi, psi)))))),
    _schema("amnesia", "property", lambda a, phi, psi: Implies(
        Not(_P(a, modal_depth(phi))), Announce(phi, Not(Knows(a, psi))))),
]}

# placeholder pools
POOLS: dict[str, tuple[str, ...]] = {
    "static": ("p", "q", "~p", "K[b]q"),
    "dynamic": ("p", "q", "~p", "K[b]q", "[p]q"),
    "local": ("p", "q", "~p", "K[a]q"),  # psi of the knowledge-preservation property
    "atoms": ("p", "q"),
    "tautologies": ("p | ~p", "K[b]q -> q", "K[b]K[b]q -> P[b,1]", "P[b,2] -> P[b,1]", "~(E[b,0] & E[b,1])"),
    "tautologies_inf": ("p | ~p", "K[b]q -> q", "K[b]K[b]q -> P[b,1]", "Ki[b]p -> p", "Ki[b]q -> Ki[b]Ki[b]q"),
}

_PLACEHOLDER_POOL = {"p": "atoms"}


@dataclass(frozen=True)
class Suite:
    """Schemas checked together under one semantics; ``expect_invalid`` lists schemas that must fail."""

    name: str
    schemas: tuple[str, ...]
    sems: tuple[Semantics, ...]
    fragment: Fragment
    pool: str = "static"
    expect_invalid: tuple[str, ...] = ()
    unambiguous_only: bool = False
    psi_pool: str | None = None


_DBEL = ("tautology", "deduction", "truth", "positive_introspection", "negative_introspection",
         "depth_monotonicity", "exact_depths", "unique_depth", "depth_deduction", "necessitation")
_DBEL_INF = ("tautology", "deduction_inf", "truth_inf", "positive_introspection_inf",
             "negative_introspection_inf", "depth_monotonicity", "exact_depths", "unique_depth",
             "bounded_knowledge", "necessitation_inf")
_DYNAMIC = ("atomic_permanence", "negation_announcement", "conjunction_announcement")
ALL_SEMANTICS = tuple(Semantics)

SUITES: dict[str, Suite] = {
    "1": Suite("1", _DBEL, ALL_SEMANTICS, H),
    "3": Suite("3", _DBEL_INF, ALL_SEMANTICS, HINF),
    "2": Suite("2", _DBEL + _DYNAMIC + ("depth_adjustment", "knowledge_announcement", "announcement_composition"),
               (Semantics.EDPAL,), L, "dynamic"),
    "4": Suite("4", _DBEL_INF + _DYNAMIC + ("depth_adjustment", "knowledge_announcement_inf",
                                            "announcement_composition"),
               (Semantics.EDPAL,), LINF, "dynamic"),
    "dpal": Suite("dpal", _DBEL + _DYNAMIC + ("depth_adjustment_dpal", "kp_prime", "ta_prime",
                                              "announcement_composition"),
                  (Semantics.DPAL,), LINF, "dynamic", expect_invalid=("announcement_composition",)),
    # named properties of the update rules
    "kp_ta": Suite("kp_ta", ("kp", "ta"), (Semantics.DPAL,), LINF, "dynamic", unambiguous_only=True,
                   psi_pool="local"),
    "kp_ta_prime": Suite("kp_ta_prime", ("kp_prime", "ta_prime"), (Semantics.DPAL,), LINF, "dynamic"),
    "amnesia": Suite("amnesia", ("amnesia",), (Semantics.EDPAL,), L, "dynamic"),
    "amnesia_dpal": Suite("amnesia_dpal", ("amnesia",), (Semantics.DPAL,), L, "dynamic",
                          expect_invalid=("amnesia",)),
    "eager_kp": Suite("eager_kp", ("ta", "kp_forward", "kp_backward"), (Semantics.EDPAL,), L, "dynamic",
                      expect_invalid=("kp_backward",)),
}


def instances(schema: AxiomSchema, max_depth: int, pool: str = "static",
              psi_pool: str | None = None, agent: str = "a") -> list[Formula]:
    """Every instantiation of ``schema`` from the pools, in a fixed order."""
    pools = []
    for name in schema.placeholders:
        key = schema.pool or _PLACEHOLDER_POOL.get(name) or (psi_pool if name == "psi" and psi_pool else pool)
        pools.append([parse(s) for s in POOLS[key]])
    params = list(schema.depth_range(max_depth)) if schema.params else [()]
    out = []
    for forms in itertools.product(*pools):
        for ds in params:
            bindings = {"a": agent, **dict(zip(schema.placeholders, forms)), **dict(zip(schema.params, ds))}
            out.append(instantiate(schema, bindings))
    return out


# -- validity sweeps -------------------------------------------------------------


@dataclass(frozen=True)
class Countermodel:
    model: KripkeModel
    world: str


@dataclass(frozen=True)
class InstanceResult:
    formula: Formula
    checked: int
    countermodel: Countermodel | None

    @property
    def valid(self) -> bool:
        return self.countermodel is None


@dataclass(frozen=True)
class SchemaReport:
    schema: AxiomSchema
    sem: Semantics
    results: tuple[InstanceResult, ...]

    @property
    def clean(self) -> bool:
        return all(r.valid for r in self.results)

    @property
    def failures(self) -> list[InstanceResult]:
        return [r for r in self.results if not r.valid]

    @property
    def checked(self) -> int:
        return sum(r.checked for r in self.results)


def _signature(f: Formula, bounds: ModelBounds) -> tuple[tuple[str, ...], tuple[str, ...]]:
    agents = tuple(sorted(agents_of(f)))
    extra = set(agents) - set(bounds.agents)
    if extra:
        raise ValueError(f"formula uses agent {sorted(extra)[0]!r} outside the bounds")
    atoms = tuple(sorted(atoms_of(f) - {"true"}))
    return agents, atoms


def _sweep_formula(f: Formula, bounds: ModelBounds, sem: Semantics, kind: RelationKind, mode: int,
                   unambiguous_only: bool = False, connected: bool = False, unbounded_depths: bool = False,
                   backend: str | None = None):
    """Sweep one formula; returns ``(checked, (model, world) or None)``.

    Mode 0 looks for a world where ``f`` fails, mode 1 for a world where it holds.
    """
    agents, atoms = _signature(f, bounds)
    prog = kernel.compile_formula(f, agents=agents, atoms=atoms)
    cuts = kernel.depth_thresholds(f)
    reps = [kernel.representatives(cuts.get(a, ()), None if unbounded_depths else bounds.max_depth)
            for a in agents]
    checked = 0
    for n in range(bounds.min_worlds, bounds.max_worlds + 1):
        fs = frames(n, len(agents), kind, True, connected)
        if not fs:
            continue
        frame_arrays = [list(list(row) for row in fr) for fr in fs] if agents else [[]]
        vals = valuations(n, len(atoms))
        out = kernel.sweep(prog, sem, n, frame_arrays, vals, reps, mode=mode,
                           unambiguous_only=unambiguous_only, stop_first=True, backend=backend)
        checked += out["checked"]
        if out["first"] is not None:
            fi, vi, digits, mask = out["first"]
            rows = [[reps[ai][digits[ai * n + w]] for w in range(n)] for ai in range(len(agents))]
            model = _model_from(n, fs[fi], vals[vi], rows, agents, atoms, kind)
            names = _world_names(n)
            want = mode == 1
            world = next(names[w] for w in range(n) if bool(mask >> w & 1) == want)
            if evaluate(model, world, f, sem) != want:
                raise AssertionError(f"kernel and reference evaluator disagree on {f!r}")
            return checked, (model, world)
    return checked, None


def check_formula(f: Formula, bounds: ModelBounds, sem: Semantics, kind: RelationKind = RelationKind.EQUIVALENCE,
                  unambiguous_only: bool = False, models: Sequence[KripkeModel] | None = None,
                  backend: str | None = None) -> InstanceResult:
    """Validity of one formula on every model within ``bounds`` (or on ``models`` if given)."""
    if models is not None:
        for m in models:
            bad = sorted(set(m.worlds) - kernel.truth_set(m, f, sem, backend=backend), key=m.worlds.index)
            if bad:
                if evaluate(m, bad[0], f, sem):
                    raise AssertionError(f"kernel and reference evaluator disagree on {f!r}")
                return InstanceResult(f, len(models), Countermodel(m, bad[0]))
        return InstanceResult(f, len(models), None)
    checked, hit = _sweep_formula(f, bounds, sem, kind, 0, unambiguous_only, backend=backend)
    return InstanceResult(f, checked, Countermodel(*hit) if hit else None)


def check_schema_validity(schema: AxiomSchema, bounds: ModelBounds = DEFAULT_BOUNDS,
                          sem: Semantics = Semantics.DPAL, *, pool: str = "static", psi_pool: str | None = None,
                          kind: RelationKind = RelationKind.EQUIVALENCE, unambiguous_only: bool = False,
                          formulas: Iterable[Formula] | None = None, models: Sequence[KripkeModel] | None = None,
                          backend: str | None = None) -> SchemaReport:
    """Check every instance of ``schema`` (or just ``formulas``) and report the first countermodel of each."""
    if kind is RelationKind.REFLEXIVE and sem is not Semantics.ADPAL:
        raise ValueError(f"{sem.value} needs equivalence relations")
    if formulas is None:
        formulas = instances(schema, bounds.max_depth, pool, psi_pool)
    results = tuple(check_formula(f, bounds, sem, kind, unambiguous_only, models, backend) for f in formulas)
    return SchemaReport(schema, sem, results)


@dataclass(frozen=True)
class SuiteResult:
    suite: Suite
    reports: tuple[SchemaReport, ...]

    @property
    def unexpected(self) -> list[SchemaReport]:
        """Reports whose outcome contradicts the suite's expectation."""
        out = []
        for r in self.reports:
            if r.schema.name in self.suite.expect_invalid:
                if r.clean:
                    out.append(r)
            elif not r.clean:
                out.append(r)
        return out

    @property
    def ok(self) -> bool:
        return not self.unexpected


def run_suite(name: str, bounds: ModelBounds = DEFAULT_BOUNDS, sems: Sequence[Semantics] | None = None,
              backend: str | None = None) -> SuiteResult:
    suite = SUITES[name]
    reports = []
    for sem in sems or suite.sems:
        for schema_name in suite.schemas:
            reports.append(check_schema_validity(
                SCHEMAS[schema_name], bounds, sem, pool=suite.pool, psi_pool=suite.psi_pool,
                unambiguous_only=suite.unambiguous_only, backend=backend))
    return SuiteResult(suite, tuple(reports))


# -- brute-force satisfiability --------------------------------------------------


def search_space(f: Formula, bounds: ModelBounds) -> int:
    """Number of models ``search_model`` may visit for ``f``."""
    agents, atoms = _signature(f, bounds)
    cuts = kernel.depth_thresholds(f)
    reps = [len(kernel.representatives(cuts.get(a, ()), None)) for a in agents]
    total = 0
    for n in range(bounds.min_worlds, bounds.max_worlds + 1):
        per_world = 1
        for r in reps:
            per_world *= r
        total += len(frames(n, len(agents), RelationKind.EQUIVALENCE, True, True)) * 2 ** (n * len(atoms)) \
            * per_world ** n
    return total


def search_model(f: Formula, bounds: ModelBounds, logic: Logic = Logic.DBEL,
                 backend: str | None = None) -> Sat | Unsat:
    """Look for a pointed model of ``f`` with at most ``bounds.max_worlds`` worlds.

    Only connected frames are visited (a model restricted to the component of
    its designated world keeps every truth value there), and depths range over
    all of the naturals through their classes.  ``UNSAT`` here means no model
    within the bounds.
    """
    sem = Semantics.EDPAL if logic is Logic.EDPAL else Semantics.DPAL
    _, hit = _sweep_formula(f, bounds, sem, RelationKind.EQUIVALENCE, 1, connected=True,
                            unbounded_depths=True, backend=backend)
    if hit is None:
        return UNSAT
    return Sat(*hit)


__all__ = [
    "AxiomSchema", "Countermodel", "DEFAULT_BOUNDS", "InstanceResult", "ModelBounds", "POOLS", "SCHEMAS",
    "SUITES", "SchemaReport", "Suite", "SuiteResult", "check_formula", "check_schema_validity", "count_models",
    "enumerate_models", "frames", "instances", "instantiate", "run_suite", "search_model", "search_space",
    "set_partitions", "valuations",
]
