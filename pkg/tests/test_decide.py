import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ldiip import corpus
from ldiip.decide import (
    BoundTooLarge,
    CounterModel,
    CounterWitness,
    Valid,
    ValidUpTo,
    agrees,
    compile_singleton,
    decide,
    decide_via_compilation,
    exhaustive_bound,
    is_compiled,
    modal_paths,
    path_bound,
    satisfiable,
)
from ldiip.model import eval, formula_frames, small_countermodel, truth_masks, validate_interface
from ldiip.sampling import random_formula
from ldiip.syntax import Atom, Not, Pair, Prop, Sig, agents_of, parse_formula, props_of

f = parse_formula
m, n = Atom("m"), Atom("n")
SINGLE = [(m, "a"), (n, "a"), (Pair(m, n), "a")]


class TestSatisfiable:
    def test_single_proposition(self):
        model, s = satisfiable(Prop("P"), 1)
        assert len(model.states) == 1 and eval(model, s, Prop("P"))

    @pytest.mark.parametrize("text", ["~(([m]a P) | [m]a ~P)", "P & ~P", "~[m]a (a knows m)"])
    def test_unsatisfiable(self, text):
        assert satisfiable(f(text), 4) is None

    def test_witness_is_smallest(self):
        model, _ = satisfiable(f("~(([m]a P) -> P)"), 4)
        assert len(model.states) == 2

    def test_bad_size(self):
        with pytest.raises(ValueError):
            satisfiable(Prop("P"), 0)


class TestDecide:
    def test_true_is_valid(self):
        assert isinstance(decide(f("true")), Valid)

    def test_truthfulness_needs_knowledge(self):
        v = decide(f("([m]a P) -> P"), 4)
        assert isinstance(v, CounterModel)
        model = v.model
        assert model.states == ("s0", "s1") and v.state == "s0"
        assert model.successor(m, "a", "s0") == "s1"
        assert model.prop_val["P"] == frozenset({"s1"})
        assert not model.knows("a", m, "s0") and model.knows("a", m, "s1")

    def test_monotonicity_fails(self):
        v = decide(f("([m]a P) -> [(m, n)]a P"), 4)
        assert isinstance(v, CounterModel)
        assert validate_interface(v.model).ok

    def test_t_law_bounded(self):
        assert decide(f("a knows m -> (([m]a P) -> P)"), 4) == ValidUpTo(4)

    def test_t_law_exhaustive(self):
        g = f("a knows m -> (([m]a P) -> P)")
        assert decide(g, ceiling=exhaustive_bound(g)) == Valid(exhaustive_bound(g))

    def test_knowledge_atom_is_not_valid(self):
        assert isinstance(decide(f("a knows m")), CounterModel)

    def test_negation_completeness(self):
        assert isinstance(decide(f("([m]a P) | [m]a ~P")), Valid)

    def test_bounded_run_never_says_valid(self):
        assert isinstance(decide(f("([m]a P) | [m]a ~P"), 2), ValidUpTo)

    def test_ceiling(self):
        g = f("([m]a P) & ([n]a Q) -> ([m]a P) | [(m, n)]b (P & Q)")
        with pytest.raises(BoundTooLarge):
            decide(g)
        assert isinstance(decide(g, ceiling=1 << 64), Valid)

    def test_counter_model_output_is_deterministic(self):
        g = f("([m]a P) -> [sig(m, b)]a P")
        assert decide(g, 4) == decide(g, 4)

    def test_paths(self):
        g = f("[m]a ([n]a P & [m]a Q) | [n]b P")
        assert [step for _, step in modal_paths(g)][1:] == [(m, "a"), (n, "b"), (n, "a"), (m, "a")]
        assert path_bound(g) == 6


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_decide_matches_brute_force(seed):
    rng = random.Random(seed)
    sig = [(m, "a"), (Pair(m, n), "a"), (Sig(m, "b"), "b")]
    g = random_formula(rng, ["P", "Q"], sig, [("a", m), ("b", n)], depth=2, size=6)
    verdict = decide(g, max_states=3)
    brute = small_countermodel(g, 3)
    assert isinstance(verdict, CounterModel) == (brute is not None)
    if isinstance(verdict, CounterModel):
        assert len(verdict.model.states) <= len(brute[0].states)
        assert not eval(verdict.model, verdict.state, g)


class TestCompilation:
    @pytest.mark.parametrize(
        "src, out",
        [
            ("[m]a ~P", "~([m]a P)"),
            ("[m]a (P & Q)", "([m]a P) & [m]a Q"),
            ("[m]a [m]a P", "[m]a P"),
            ("[m]a [n]a ~[m]a P", "~([m]a [n]a [m]a P)"),
        ],
    )
    def test_rewrites(self, src, out):
        assert compile_singleton(f(src)) == f(out)

    def test_needs_one_agent(self):
        with pytest.raises(ValueError):
            compile_singleton(f("([m]a P) & [m]b P"))
        with pytest.raises(ValueError):
            decide_via_compilation(f("b knows m -> [m]a P"))

    def test_is_compiled(self):
        assert is_compiled(f("~([m]a [n]a P) & [m]a a knows n"))
        assert not is_compiled(f("[m]a ~P"))
        assert not is_compiled(f("[m]a [m]a P"))

    def test_knowledge_atom(self):
        assert isinstance(decide_via_compilation(f("a knows m")), CounterWitness)

    @pytest.mark.parametrize("name", [n for n in corpus.names() if n != "Thm2.7-modal-idempotency-bis"])
    def test_corpus_conclusions(self, name):
        d = corpus.load(name)
        if not d.premises:
            assert isinstance(decide_via_compilation(d.conclusion), Valid)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_compilation_preserves_truth(seed):
    rng = random.Random(seed)
    g = random_formula(rng, ["P", "Q"], SINGLE, [("a", m)], depth=3, size=7)
    c = compile_singleton(g)
    assert is_compiled(c)
    atoms = props_of(g)
    for frame in formula_frames(g, 3):
        assert truth_masks(frame, g, atoms) == truth_masks(frame, c, atoms)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_compilation_agrees_with_decide(seed):
    rng = random.Random(seed)
    g = random_formula(rng, ["P", "Q"], SINGLE, [("a", m)], depth=3, size=7)
    assert agents_of(g) <= {"a"}
    v1 = decide(g, ceiling=1 << 64)
    v2 = decide_via_compilation(g)
    assert agrees(v1, v2)
    if isinstance(v2, CounterWitness):
        assert eval(v2.model, v2.state, Not(compile_singleton(g)))
