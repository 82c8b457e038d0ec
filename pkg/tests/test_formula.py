import itertools

import pytest
from hypothesis import given

from depthlogic.formula import (
    BOTTOM,
    H,
    HINF,
    L,
    LINF,
    S5D,
    TOP,
    And,
    Announce,
    AtLeastDepth,
    Atom,
    ExactDepth,
    FormulaSyntaxError,
    FragmentError,
    Implies,
    Knows,
    KnowsInf,
    Logic,
    Not,
    Or,
    agent_fragment,
    children,
    closure,
    f_phi,
    in_fragment,
    modal_depth,
    parse,
    render,
    translate_s5d,
    walk,
)
from depthlogic.model import build
from depthlogic.semantics import eval as evaluate

from strategies import formulas

p, q = Atom("p"), Atom("q")


# -- parsing and rendering ---------------------------------------------------------


def test_implication_binds_looser_than_knowledge():
    assert parse("K[a] p -> p") == Implies(Knows("a", p), p)
    assert parse("K[a] p -> p") == Not(And(Knows("a", p), Not(p)))


def test_diamond_expands_to_dual_box():
    want = Not(Announce(Not(Knows("c1", Atom("m1"))), Not(Knows("c0", Atom("m0")))))
    assert parse("<~K[c1] m1> K[c0] m0") == want


def test_depth_atoms_parse():
    assert parse("E[a,3] & P[a,2]") == And(ExactDepth("a", 3), AtLeastDepth("a", 2))


@pytest.mark.parametrize("f, text", [
    (Knows("a", p), "K[a] p"),
    (Announce(p, ExactDepth("a", -1)), "[p] E[a,-1]"),
    (And(p, Not(q)), "p & ~q"),
])
def test_render_examples(f, text):
    assert render(f) == text


def test_negative_rendered_depth_is_not_source_syntax():
    with pytest.raises(FormulaSyntaxError):
        parse(render(Announce(p, ExactDepth("a", -1))))


def test_negative_depth_literal_is_a_parse_error():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse("E[a,-1]")
    assert (exc.value.line, exc.value.column) == (1, 5)


def test_syntax_error_position_and_expected_tokens():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse("p\n & & q")
    e = exc.value
    assert (e.line, e.column) == (2, 4)
    assert "~" in e.expected and "K" in e.expected


@pytest.mark.parametrize("text", ["K[a p", "p &", "(p", "[p q", "E[a]", "p q", "K[] p", ""])
def test_malformed_input_rejected(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_precedence_and_associativity():
    r = Atom("r")
    assert parse("p -> q -> r") == Implies(p, Implies(q, r))
    assert parse("p | q & r") == Or(p, And(q, r))
    assert parse("~p & q") == And(Not(p), q)
    assert parse("[p] q & r") == And(Announce(p, q), r)
    assert parse("K[a] p & q") == And(Knows("a", p), q)


def test_constants_and_comments():
    assert parse("true") == TOP
    assert parse("false") == BOTTOM
    assert parse("p # trailing comment\n & q") == And(p, q)


def test_iff_is_both_implications():
    assert parse("p <-> q") == And(Implies(p, q), Implies(q, p))


@given(formulas())
def test_render_parse_round_trip(f):
    assert parse(render(f)) == f


@given(formulas())
def test_render_is_stable(f):
    assert render(parse(render(f))) == render(f)


# -- modal depth -------------------------------------------------------------------


@pytest.mark.parametrize("text, d", [
    ("p", 0), ("E[a,4]", 0), ("P[b,2]", 0),
    ("K[a](p & K[b]q)", 2),
    ("[K[a]p] K[b]q", 2),
    ("Ki[a] Ki[b] K[a] p", 3),
    ("~(K[a]p & K[b]K[a]q)", 2),
])
def test_modal_depth(text, d):
    assert modal_depth(parse(text)) == d


@given(formulas())
def test_depth_dominates_subformulas(f):
    for g in walk(f):
        if isinstance(g, Announce):
            assert modal_depth(g) == modal_depth(g.announced) + modal_depth(g.body)
        else:
            for c in children(g):
                assert modal_depth(c) <= modal_depth(g)


# -- closure -----------------------------------------------------------------------


def test_closure_examples():
    kp = KnowsInf("a", p)
    assert closure([kp]) == {kp, Not(kp), p, Not(p)}
    pq = And(p, q)
    assert closure([pq]) == {pq, Not(pq), p, Not(p), q, Not(q)}
    assert closure([Not(p)]) == {Not(p), p}


def test_closure_rejects_bounded_knowledge_and_announcements():
    with pytest.raises(FragmentError):
        closure([Knows("a", p)])
    with pytest.raises(FragmentError):
        closure([Announce(p, q)])


@given(formulas(announcements=False).map(lambda f: translate_s5d(f, Logic.DBEL)))
def test_closure_size_bound(f):
    cl = closure([f])
    subs = set(walk(f))
    assert subs <= cl
    assert len(cl) <= 2 * len(subs)
    assert not any(isinstance(g, Not) and isinstance(g.sub, Not) and g.sub not in subs for g in cl)


# -- fragments ---------------------------------------------------------------------


def test_fragment_examples():
    assert not in_fragment(KnowsInf("a", p), L)
    assert not in_fragment(Announce(p, q), H)
    assert not in_fragment(Knows("a", Knows("b", p)), agent_fragment("a"))


def test_agent_fragment_excludes_depth_atoms():
    assert in_fragment(Knows("a", KnowsInf("a", p)), agent_fragment("a"))
    assert not in_fragment(Knows("a", AtLeastDepth("a", 1)), agent_fragment("a"))


def test_s5d_fragment():
    assert in_fragment(And(ExactDepth("a", 1), KnowsInf("a", p)), S5D)
    assert not in_fragment(AtLeastDepth("a", 1), S5D)
    assert not in_fragment(Knows("a", p), S5D)


@given(formulas())
def test_fragment_inclusions(f):
    if in_fragment(f, H):
        assert in_fragment(f, HINF) and in_fragment(f, L)
    if in_fragment(f, HINF) or in_fragment(f, L):
        assert in_fragment(f, LINF)


# -- F_phi -------------------------------------------------------------------------


def test_f_phi_atoms_and_negation():
    phi = parse("K[c]K[c]p0")
    for atom in (p, ExactDepth("a", 2), AtLeastDepth("b", 1)):
        assert f_phi(phi, atom) == TOP
    psi = parse("K[a]K[b]p0")
    assert f_phi(phi, Not(psi)) == f_phi(phi, psi)


def test_f_phi_unfolds_node_by_node():
    phi = parse("K[c]K[c]p0")

    def P(a, d):
        return AtLeastDepth(a, d)

    inner = And(
        And(
            Not(KnowsInf("b", Implies(phi, P("b", 2)))),
            KnowsInf("b", Implies(phi, Or(Not(P("b", 2)), P("b", 2)))),
        ),
        KnowsInf("b", TOP),
    )
    want = And(
        And(
            Not(KnowsInf("a", Implies(phi, P("a", 2)))),
            KnowsInf("a", Implies(phi, Or(Not(P("a", 2)), P("a", 3)))),
        ),
        KnowsInf("a", inner),
    )
    assert f_phi(phi, parse("K[a]K[b]p0")) == want


@given(formulas(knows_inf=True, announcements=True), formulas(announcements=False, max_leaves=4))
def test_f_phi_uses_only_unbounded_knowledge(psi, phi):
    out = f_phi(phi, psi)
    phi_subs = set(walk(phi))
    psi_agents = {g.agent for g in walk(psi) if hasattr(g, "agent")}
    for g in walk(out):
        if g in phi_subs:
            continue
        assert not isinstance(g, (Knows, Announce))
        if isinstance(g, (ExactDepth, AtLeastDepth)):
            assert g.agent in psi_agents


# -- translation -------------------------------------------------------------------


def _small_models():
    """Every one-agent model with at most two worlds and depths up to 2."""
    out = []
    for n in (1, 2):
        ws = [f"w{i}" for i in range(n)]
        for linked in ([False, True] if n == 2 else [False]):
            gens = {"a": [("w0", "w1")] if linked else []}
            for vs in itertools.product([frozenset(), frozenset({"p"})], repeat=n):
                for ds in itertools.product(range(3), repeat=n):
                    out.append(build(ws, ["a"], gens, dict(zip(ws, vs)), {("a", w): d for w, d in zip(ws, ds)},
                                     atoms=["p"]))
    return out


def test_bounded_knowledge_translation_is_equivalent():
    f = parse("K[a]p")
    t = translate_s5d(f, Logic.DBEL)
    assert in_fragment(t, S5D)
    for m in _small_models():
        for w in m.worlds:
            assert evaluate(m, w, f) == evaluate(m, w, t)


def test_nested_knowledge_translation_demands_depth():
    t = translate_s5d(parse("K[a]K[b]p"), Logic.DBEL)
    assert t == And(Not(ExactDepth("a", 0)), KnowsInf("a", KnowsInf("b", p)))


def test_announcement_translations():
    assert translate_s5d(parse("[p]q"), Logic.EDPAL) == parse("p -> q")
    assert translate_s5d(parse("[p]E[a,1]"), Logic.EDPAL) == parse("p -> E[a,1]")


def test_depth_adjustment_shifts_by_announced_depth():
    t = translate_s5d(parse("[K[b]q] E[a,0]"), Logic.EDPAL)
    assert t == parse("Ki[b] q -> E[a,1]")


def test_dbel_translation_rejects_announcements():
    with pytest.raises(FragmentError):
        translate_s5d(parse("[p]q"), Logic.DBEL)


@given(formulas())
def test_translation_lands_in_s5d(f):
    assert in_fragment(translate_s5d(f, Logic.EDPAL), S5D)
