import pytest
from hypothesis import given

from depthlogic.model import (
    KripkeModel,
    ModelFormatError,
    RelationKind,
    build,
    export,
    is_unambiguous,
    load,
    load_file,
    size_norm,
    validate,
)
from depthlogic.muddy import Constant, muddy_model
from depthlogic.semantics import Semantics, update
from depthlogic.formula import parse

from strategies import models

LEAKAGE = """\
kind reflexive
agents a b c
worlds w0 w1 w2
atom p0: w0 w1
depth a: *=1
depth b: w0=0 w1=2 w2=0
depth c: *=2
rel a:
rel b: w0-w1 w1-w2
rel c:
"""

TINY = "kind equivalence\nagents a\nworlds s0\ndepth a: *=0\n"


def test_leakage_model_loads():
    m = load(LEAKAGE)
    assert m.worlds == ("w0", "w1", "w2")
    assert m.agents == ("a", "b", "c")
    assert len(m.rel["b"]) == 7
    assert ("w0", "w2") not in m.rel["b"]
    assert m.rel["a"] == {(w, w) for w in m.worlds}
    assert [m.depth[("b", w)] for w in m.worlds] == [0, 2, 0]
    assert m.val["w2"] == frozenset()


def test_bundled_leakage_model_matches_listing():
    assert load_file("builtin:leakage") == load(LEAKAGE)


def test_unknown_bundled_model():
    with pytest.raises(ModelFormatError):
        load_file("builtin:nope")


def test_single_world_model():
    m = load(TINY)
    assert m.worlds == ("s0",)
    assert m.rel["a"] == {("s0", "s0")}
    assert validate(m) == []


def test_equivalence_generators_are_closed():
    m = load("kind equivalence\nagents a\nworlds s0 s1\ndepth a: *=0\nrel a: s0-s1\n")
    assert m.rel["a"] == {("s0", "s0"), ("s1", "s1"), ("s0", "s1"), ("s1", "s0")}


def test_transitive_closure():
    m = load("agents a\nworlds x y z\ndepth a: *=0\nrel a: x-y y-z\n")
    assert ("x", "z") in m.rel["a"] and ("z", "x") in m.rel["a"]


def test_directed_generators_on_reflexive_kind():
    m = load("kind reflexive\nagents a\nworlds s0 s1\ndepth a: *=0\nrel a: s0>s1\n")
    assert m.rel["a"] == {("s0", "s0"), ("s1", "s1"), ("s0", "s1")}
    assert validate(m) == []


@pytest.mark.parametrize("source, line", [
    ("agents a\nworlds s0\ndepth a: *=0\nrel a: s0-s9\n", 4),
    ("agents a\nworlds s0 s0\ndepth a: *=0\n", 2),
    ("agents a\nworlds s0\ndepth a: *=0\ndepth z: *=0\n", 4),
    ("agents a\nworlds s0 s1\ndepth a: *=0\nrel a: s0>s1\n", 4),
    ("agents a\nworlds s0\natom p: s3\ndepth a: *=0\n", 3),
    ("agents a\nworlds s0\ndepth a: *=-1\n", 3),
    ("agents a\nworlds s0\ndepth a: s0=x\n", 3),
    ("kind transitive\nagents a\nworlds s0\n", 1),
    ("agents a\nworlds s0\nhello world\n", 3),
])
def test_load_errors_carry_line(source, line):
    with pytest.raises(ModelFormatError) as exc:
        load(source)
    assert exc.value.line == line


def test_missing_depth_is_not_defaulted():
    with pytest.raises(ModelFormatError, match="missing depth"):
        load("agents a b\nworlds s0\ndepth a: *=0\n")


def test_missing_header_lines():
    with pytest.raises(ModelFormatError):
        load("worlds s0\n")
    with pytest.raises(ModelFormatError):
        load("agents a\n")


def test_signed_depths_load():
    m = load("depths signed\nagents a\nworlds s0\ndepth a: *=-2\n")
    assert m.depth[("a", "s0")] == -2
    assert validate(m) == []


# -- export ------------------------------------------------------------------------


def test_native_round_trip_of_leakage_model():
    m = load(LEAKAGE)
    assert load(export(m, "native")) == m


@given(models())
def test_native_round_trip(m):
    assert load(export(m, "native")) == m


def test_native_round_trip_after_edpal_update():
    m = load_file("builtin:leakage").equivalence_closure()
    out = update(m, parse("K[c]K[c]p0"), Semantics.EDPAL)
    assert min(out.depth.values()) < 0
    assert load(export(out, "native")) == out


def test_native_round_trip_after_dpal_update():
    m = muddy_model(2, 2, Constant((1, 0))).model
    out = update(m, parse("~K[1]m1"), Semantics.DPAL)
    assert load(export(out, "native")) == out


def test_dot_single_world():
    text = export(load(TINY), "dot")
    assert text.count("subgraph") == 1
    assert text.count("[label=") == 1
    assert "->" not in text


def test_dot_leakage_edges():
    text = export(load(LEAKAGE), "dot")
    b = text.split("subgraph cluster_b")[1].split("}")[0]
    edges = [line.strip() for line in b.splitlines() if "->" in line]
    assert edges == ['"b/w0" -> "b/w1" [dir=none];', '"b/w1" -> "b/w2" [dir=none];']
    assert '"w1 | p0 | a=1,b=2,c=2"' in text
    for agent in "ac":
        block = text.split(f"subgraph cluster_{agent}")[1].split("}")[0]
        assert "->" not in block


def test_dot_marks_cross_copy_links():
    m = muddy_model(2, 2, Constant((0, 0))).model
    text = export(update(m, parse("~K[1]m1"), Semantics.DPAL), "dot")
    assert "style=dashed" in text


def test_unknown_export_format():
    with pytest.raises(ValueError):
        export(load(TINY), "json")


# -- validation --------------------------------------------------------------------


def _raw(rel, kind=RelationKind.EQUIVALENCE, depth=0):
    ws = ("s0", "s1")
    return KripkeModel(ws, ("a",), {"a": frozenset(rel)}, {w: frozenset() for w in ws},
                       {("a", w): depth for w in ws}, kind)


def test_symmetry_violation_reported():
    report = validate(_raw({("s0", "s0"), ("s1", "s1"), ("s0", "s1")}))
    assert any("symmetry" in line for line in report)


def test_reflexive_kind_allows_asymmetry():
    assert validate(_raw({("s0", "s0"), ("s1", "s1"), ("s0", "s1")}, RelationKind.REFLEXIVE)) == []


def test_negative_user_depth_reported():
    report = validate(_raw({("s0", "s0"), ("s1", "s1")}, depth=-1))
    assert any("negative depth" in line for line in report)


def test_missing_reflexive_pair_reported():
    report = validate(_raw({("s0", "s0")}, RelationKind.REFLEXIVE))
    assert any("reflexive" in line for line in report)


def test_transitivity_violation_reported():
    ws = ("x", "y", "z")
    rel = {(w, w) for w in ws} | {("x", "y"), ("y", "x"), ("y", "z"), ("z", "y")}
    m = KripkeModel(ws, ("a",), {"a": frozenset(rel)}, {w: frozenset() for w in ws},
                    {("a", w): 0 for w in ws}, RelationKind.EQUIVALENCE)
    assert any("transitivity" in line for line in validate(m))


def test_depth_overflow_reported():
    m = _raw({("s0", "s0"), ("s1", "s1")}, depth=2**64)
    assert any("64 bits" in line for line in validate(m))


@given(models())
def test_loaded_relations_are_partitions(m):
    assert validate(m) == []
    for a in m.agents:
        classes = m.classes(a)
        assert sorted(w for c in classes for w in c) == sorted(m.worlds)
        for s in m.worlds:
            for t in m.worlds:
                same = any(s in c and t in c for c in classes)
                assert ((s, t) in m.rel[a]) == same


# -- unambiguity and size ----------------------------------------------------------


def test_constant_depths_are_unambiguous():
    m = load("agents a b\nworlds x y\ndepth a: *=3\ndepth b: *=0\nrel a: x-y\nrel b: x-y\n")
    assert is_unambiguous(m)


def test_leakage_model_is_ambiguous():
    assert not is_unambiguous(load(LEAKAGE))


def test_amnesia_muddy_instance_is_unambiguous():
    assert is_unambiguous(muddy_model(3, 3, Constant((2, 1, 0))).model)


def test_size_norm_examples():
    assert size_norm(load(TINY)) == 2
    assert size_norm(load(LEAKAGE)) == 16
    full = load("agents a\nworlds x y\ndepth a: *=0\nrel a: x-y\n")
    assert size_norm(full) == 6


@given(models())
def test_size_norm_lower_bound(m):
    assert size_norm(m) >= 2 * len(m.worlds)


def test_build_matches_load():
    m = build(["x", "y"], ["a"], {"a": [("x", "y")]}, {"x": {"p"}}, {("a", "x"): 1, ("a", "y"): 2}, atoms=["p"])
    assert m == load("agents a\nworlds x y\natoms p\natom p: x\ndepth a: x=1 y=2\nrel a: x-y\n")
