import pytest

from depthlogic.axiom_lab import (
    DEFAULT_BOUNDS,
    POOLS,
    SCHEMAS,
    SUITES,
    ModelBounds,
    check_formula,
    check_schema_validity,
    count_models,
    enumerate_models,
    frames,
    instances,
    instantiate,
    run_suite,
    search_model,
    set_partitions,
)
from depthlogic.formula import H, in_fragment, parse
from depthlogic.model import RelationKind, load_file, validate
from depthlogic.satisfiability import UNSAT, Sat
from depthlogic.semantics import Semantics, eval as evaluate

DPAL, EDPAL, ADPAL = Semantics.DPAL, Semantics.EDPAL, Semantics.ADPAL


def bell(n):
    """Bell numbers from the Bell triangle."""
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[-1]


# -- enumeration -------------------------------------------------------------------


def test_two_world_count():
    b = ModelBounds(2, agents=("a",), atoms=("p",), max_depth=1, min_worlds=2)
    assert len(list(enumerate_models(b))) == 2 * 4 * 4 == count_models(b)


def test_single_trivial_model():
    assert len(list(enumerate_models(ModelBounds(1, agents=("a",), atoms=(), max_depth=0)))) == 1


def test_three_world_partitions():
    assert len(list(set_partitions(3))) == 5
    assert [len(list(set_partitions(n))) for n in range(1, 7)] == [bell(n) for n in range(1, 7)]


@pytest.mark.parametrize("bounds", [
    ModelBounds(2),
    ModelBounds(3, agents=("a",), atoms=("p",), max_depth=2),
    ModelBounds(3, agents=("a", "b"), atoms=(), max_depth=1, min_worlds=3),
])
def test_enumeration_is_complete_and_duplicate_free(bounds):
    expected = 0
    na, np_ = len(bounds.agents), len(bounds.atoms)
    for n in range(bounds.min_worlds, bounds.max_worlds + 1):
        expected += bell(n) ** na * 2 ** (n * np_) * (bounds.max_depth + 1) ** (n * na)
    seen = set()
    for m in enumerate_models(bounds):
        assert validate(m) == []
        key = (m.worlds, tuple(tuple(sorted(m.rel[a])) for a in m.agents), tuple(sorted(m.val.items())),
               tuple(sorted(m.depth.items())))
        seen.add(key)
    assert len(seen) == expected == count_models(bounds)


def test_reflexive_enumeration_count():
    b = ModelBounds(2, agents=("a",), atoms=(), max_depth=0, min_worlds=2)
    models = list(enumerate_models(b, RelationKind.REFLEXIVE))
    assert len(models) == 4
    assert all(validate(m) == [] for m in models)


def test_frames_up_to_isomorphism():
    # two agents on two worlds: (same, same), (same, split), (split, same), (split, split)
    assert len(frames(2, 2)) == 4
    assert len(frames(3, 1)) == 3
    assert len(frames(3, 1, connected=True)) == 1


@pytest.mark.parametrize("kwargs", [dict(max_worlds=0), dict(max_worlds=2, agents=()),
                                    dict(max_worlds=2, max_depth=-1), dict(max_worlds=2, min_worlds=3)])
def test_bad_bounds(kwargs):
    with pytest.raises(ValueError):
        ModelBounds(**kwargs)


# -- instantiation -----------------------------------------------------------------


def test_truth_instance():
    assert instantiate(SCHEMAS["truth"], {"a": "a", "phi": "p"}) == parse("K[a]p -> p")


def test_depth_deduction_instance():
    f = instantiate(SCHEMAS["depth_deduction"], {"a": "a", "phi": "K[b]q"})
    assert f == parse("K[a]K[b]q -> P[a,1]")


def test_dpal_depth_adjustment_instance():
    f = instantiate(SCHEMAS["depth_adjustment_dpal"], {"a": "a", "phi": "K[b]q", "d": 0})
    assert f == parse("[K[b]q]E[a,0] <-> (K[b]q -> ((P[a,1] & E[a,1]) | (~P[a,1] & E[a,0])))")


def test_negative_introspection_instance():
    f = instantiate(SCHEMAS["negative_introspection"], {"a": "a", "phi": "p"})
    assert f == parse("(~K[a]p & P[a,1]) -> K[a]~K[a]p")


def test_arity_mismatch():
    with pytest.raises(ValueError):
        instantiate(SCHEMAS["truth"], {"a": "a"})
    with pytest.raises(ValueError):
        instantiate(SCHEMAS["truth"], {"a": "a", "phi": "p", "psi": "q"})


@pytest.mark.parametrize("suite", list(SUITES))
def test_instances_lie_in_the_declared_fragment(suite):
    s = SUITES[suite]
    for name in s.schemas:
        for f in instances(SCHEMAS[name], 3, s.pool, s.psi_pool):
            assert in_fragment(f, s.fragment), (name, f)


def test_static_pools_are_announcement_free():
    for key in ("static", "local", "atoms"):
        assert all(in_fragment(parse(t), H) for t in POOLS[key])


def test_tautology_pools_are_valid():
    for key in ("tautologies", "tautologies_inf"):
        for text in POOLS[key]:
            assert check_formula(parse(text), DEFAULT_BOUNDS, DPAL).valid, text


# -- sweeps ------------------------------------------------------------------------


@pytest.mark.parametrize("suite", ["1", "3"])
@pytest.mark.parametrize("sem", list(Semantics))
def test_static_tables_valid(suite, sem):
    result = run_suite(suite, sems=[sem])
    assert result.ok, [r.schema.name for r in result.unexpected]


@pytest.mark.parametrize("suite", ["2", "4"])
def test_eager_tables_valid(suite):
    assert run_suite(suite).ok


def test_dpal_set_valid_and_composition_fails():
    result = run_suite("dpal")
    assert result.ok
    comp = next(r for r in result.reports if r.schema.name == "announcement_composition")
    assert comp.failures
    bad = comp.failures[0]
    assert not evaluate(bad.countermodel.model, bad.countermodel.world, bad.formula, DPAL)


def test_positive_introspection_inf_under_dpal():
    assert check_schema_validity(SCHEMAS["positive_introspection_inf"], sem=DPAL).clean


def test_amnesia_is_eager_only():
    assert run_suite("amnesia").ok
    rep = check_schema_validity(SCHEMAS["amnesia"], sem=DPAL, pool="dynamic")
    assert rep.failures
    f = parse("~P[a,1] -> [K[b]q] ~K[a]p")
    res = check_formula(f, DEFAULT_BOUNDS, DPAL)
    assert not res.valid
    m, w = res.countermodel.model, res.countermodel.world
    assert m.depth[("a", w)] == 0
    assert evaluate(m, w, parse("K[b]q & K[a]p"), DPAL)


def test_knowledge_properties_on_unambiguous_models():
    assert run_suite("kp_ta").ok
    assert run_suite("kp_ta_prime").ok


def test_eager_knowledge_preservation_is_one_way():
    result = run_suite("eager_kp")
    assert result.ok
    back = next(r for r in result.reports if r.schema.name == "kp_backward")
    assert back.failures


def _leakage_instance():
    return instantiate(SCHEMAS["kp_prime_forward"], {"a": "a", "phi": "K[c]K[c]p0", "psi": "K[b]p0"})


def test_leakage_model_refutes_preservation_under_adpal():
    m = load_file("builtin:leakage")
    rep = check_schema_validity(SCHEMAS["kp_prime_forward"], sem=ADPAL, kind=RelationKind.REFLEXIVE,
                                formulas=[_leakage_instance()], models=[m])
    assert not rep.clean
    assert rep.failures[0].countermodel.world == "w1"
    assert rep.failures[0].countermodel.model == m


def test_preservation_holds_under_dpal_on_the_same_inputs():
    m = load_file("builtin:leakage").equivalence_closure()
    rep = check_schema_validity(SCHEMAS["kp_prime_forward"], sem=DPAL, formulas=[_leakage_instance()], models=[m])
    assert rep.clean


def test_reflexive_sweep_needs_adpal():
    with pytest.raises(ValueError):
        check_schema_validity(SCHEMAS["truth"], sem=DPAL, kind=RelationKind.REFLEXIVE)


def test_reflexive_sweep_keeps_truth_but_not_introspection():
    # truth needs reflexivity only, so it survives the reflexive sweep
    rep = check_schema_validity(SCHEMAS["truth"], ModelBounds(2), ADPAL, kind=RelationKind.REFLEXIVE)
    assert rep.clean
    neg = check_schema_validity(SCHEMAS["negative_introspection_inf"], ModelBounds(3), ADPAL,
                                kind=RelationKind.REFLEXIVE)
    assert not neg.clean


def test_sweep_agrees_with_enumeration_on_a_schema():
    bounds = ModelBounds(2, max_depth=2)
    models = list(enumerate_models(bounds))
    for f in instances(SCHEMAS["negative_introspection"], 2):
        brute = all(evaluate(m, w, f) for m in models for w in m.worlds)
        assert check_formula(f, bounds, DPAL).valid == brute


# -- brute-force satisfiability ----------------------------------------------------


def test_search_model_finds_witness():
    f = parse("Ki[a]K[b]p & ~K[a]K[b]p")
    res = search_model(f, ModelBounds(2))
    assert isinstance(res, Sat)
    assert evaluate(res.witness, res.world, f)


def test_search_model_reports_unsat():
    assert search_model(parse("K[a]p & ~p"), ModelBounds(3)) is UNSAT


def test_search_model_needs_several_worlds():
    f = parse("~Ki[a]p & ~Ki[a]q & p & q")
    assert search_model(f, ModelBounds(1)) is UNSAT
    assert isinstance(search_model(f, ModelBounds(3)), Sat)


def test_search_model_depth_beyond_bounds():
    f = parse("E[a,7] & K[a]p")
    res = search_model(f, ModelBounds(1))
    assert isinstance(res, Sat) and res.witness.depth[("a", res.world)] == 7


def test_exhaustive_instances_are_deterministic():
    a = instances(SCHEMAS["deduction"], 3)
    b = instances(SCHEMAS["deduction"], 3)
    assert a == b and len(a) == len(POOLS["static"]) ** 2
    assert len(set(a)) == len(a)
