import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from depthlogic import kernel
from depthlogic.axiom_lab import ModelBounds, check_formula, enumerate_models
from depthlogic.formula import TOP, Announce, parse
from depthlogic.model import KripkeModel, RelationKind, build
from depthlogic.semantics import Semantics, truth_set as reference

from corpus import formula_corpus
from strategies import formulas, models

BACKENDS = ["python"] + (["compiled"] if kernel.BACKEND == "compiled" else [])


@pytest.mark.parametrize("backend", BACKENDS)
@given(m=models(), f=formulas(max_leaves=7), sem=st.sampled_from(list(Semantics)))
def test_backends_agree_with_reference(backend, m, f, sem):
    assert kernel.truth_set(m, f, sem, backend=backend) == reference(m, f, sem)


@pytest.mark.parametrize("backend", BACKENDS)
@given(m=models(kind=RelationKind.REFLEXIVE), f=formulas(max_leaves=7))
def test_backends_agree_on_reflexive_models(backend, m, f):
    assert kernel.truth_set(m, f, Semantics.ADPAL, backend=backend) == reference(m, f, Semantics.ADPAL)


def test_compiled_backend_is_default_when_built():
    pytest.importorskip("depthlogic._ckernel")
    assert kernel.BACKEND == "compiled"


def test_large_updates_fall_back_to_python():
    n = 40
    ws = [f"w{i}" for i in range(n)]
    m = build(ws, ["a"], {"a": [(ws[i], ws[i + 1]) for i in range(0, n - 1, 2)]},
              {w: {"p"} if i % 3 else set() for i, w in enumerate(ws)},
              {("a", w): i % 3 for i, w in enumerate(ws)}, atoms=["p"])
    f = parse("[K[a]p] [p] K[a]K[a]p | [true] ~p")
    for backend in BACKENDS:
        assert kernel.truth_set(m, f, Semantics.DPAL, backend=backend) == reference(m, f, Semantics.DPAL)


@given(formulas(max_leaves=7), models(max_depth=7))
def test_depth_classes_preserve_truth(f, m):
    """Moving every depth to its class representative keeps every truth value."""
    cuts = kernel.depth_thresholds(f)

    def rep(a, d):
        reps = kernel.representatives(cuts.get(a, ()), None)
        return max(r for r in reps if r <= d)

    moved = KripkeModel(m.worlds, m.agents, m.rel, m.val, {(a, w): rep(a, d) for (a, w), d in m.depth.items()},
                        m.kind, m.atoms)
    for sem in Semantics:
        assert reference(m, f, sem) == reference(moved, f, sem)


def test_representatives():
    assert kernel.representatives({2, 5, -1}, None) == [0, 2, 5]
    assert kernel.representatives({2, 5}, 3) == [0, 2]
    assert kernel.representatives(set(), 3) == [0]


def test_thresholds_follow_announcement_depth():
    cuts = kernel.depth_thresholds(parse("[K[a]p] K[a]K[b]q"))
    assert cuts["a"] == {0, 1, 2}
    assert cuts["b"] == {0, 1}


def test_reduced_sweep_matches_full_enumeration():
    """The class, signature and symmetry reductions find exactly the invalid formulas."""
    bounds = ModelBounds(2, max_depth=2)
    full = list(enumerate_models(bounds))
    for f in formula_corpus(7, 40, budget=4, modal=2, max_d=2, announcements=True):
        for sem in (Semantics.DPAL, Semantics.EDPAL):
            brute = all(w in kernel.truth_set(m, f, sem) for m in full for w in m.worlds)
            assert check_formula(f, bounds, sem).valid == brute


@pytest.mark.parametrize("backend", BACKENDS)
def test_sweep_counts_are_backend_independent(backend):
    f = parse("K[a]p -> [p] K[b]p")
    res = check_formula(f, ModelBounds(3), Semantics.DPAL, backend=backend)
    ref = check_formula(f, ModelBounds(3), Semantics.DPAL, backend="python")
    assert (res.checked, res.valid) == (ref.checked, ref.valid)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernel.backend_module("gpu")


def test_random_deep_chain_against_reference():
    rng = random.Random(3)
    m = build(["x", "y", "z"], ["a", "b"], {"a": [("x", "y")], "b": [("y", "z")]},
              {"x": {"p"}, "y": {"p", "q"}, "z": set()}, {(a, w): rng.randint(0, 3) for a in "ab" for w in "xyz"},
              atoms=["p", "q"])
    f = TOP
    for _ in range(4):
        f = Announce(parse("~K[a]q | K[b]p"), f)
    f = Announce(f, parse("K[a]K[b]p"))
    for sem in Semantics:
        for backend in BACKENDS:
            assert kernel.truth_set(m, f, sem, backend=backend) == reference(m, f, sem)


def test_environment_forces_python_backend():
    env = dict(os.environ, DEPTHLOGIC_PURE="1")
    code = "from depthlogic import kernel; print(kernel.BACKEND)"
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert proc.stdout.strip() == "python"
