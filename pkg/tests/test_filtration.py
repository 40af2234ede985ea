import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ldiip.model import FiniteModel, eval, filtrate, global_truth, validate_interface
from ldiip.sampling import random_formula, random_model
from ldiip.syntax import Atom, Pair, Sig, modal_signature, parse_formula, subformula_closure

m, n = Atom("m"), Atom("n")
SIG = [(m, "a"), (Pair(m, n), "a"), (Sig(n, "b"), "b")]


def collapse_example():
    # s0 and s1 agree on every subformula of f but step to states that differ on Q
    return FiniteModel.build(
        states=["s0", "s1", "t0", "t1"],
        trans={(m, "a"): {"s0": "t0", "s1": "t1", "t0": "t0", "t1": "t1"}},
        bases={("a", "t0"): [m], ("a", "t1"): [m]},
        val={"P": ["t0", "t1"], "Q": ["t0"]},
    )


def test_collapse_example():
    f = parse_formula("([m]a P) & Q")
    model = collapse_example()
    filt = filtrate(model, f)
    assert filt.state_map["s0"] == filt.state_map["s1"] == "s0"
    assert validate_interface(filt.model).ok
    for s in model.states:
        for g in subformula_closure(f):
            assert eval(filt.model, filt.state_map[s], g) == eval(model, s, g)


def test_literal_minimal_filtration_is_not_functional():
    # Relating class X to class Y whenever some member of X steps to some
    # member of Y gives the merged class two successors here.
    f = parse_formula("([m]a P) & Q")
    model = collapse_example()
    filt = filtrate(model, f)
    cls = filt.state_map
    targets = {cls[model.successor(m, "a", s)] for s in model.states if cls[s] == cls["s0"]}
    assert len(targets) == 2
    # the representative construction keeps exactly one
    assert len(filt.model.successors(m, "a", cls["s0"])) == 1


def test_rejects_invalid_model():
    bad = FiniteModel.build(["s0"], {(m, "a"): {"s0": "s0"}})
    with pytest.raises(ValueError):
        filtrate(bad, parse_formula("[m]a P"))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_filtration_preserves_subformulas(seed):
    rng = random.Random(seed)
    model = random_model(rng, 4, SIG, knowledge=[("b", m)])
    f = random_formula(rng, ["P", "Q"], SIG, [("a", m), ("b", m)], depth=3, size=7)
    filt = filtrate(model, f)
    gamma = subformula_closure(f)
    assert validate_interface(filt.model).ok
    assert len(filt.model.states) <= min(len(model.states), 2 ** len(gamma))
    for s in model.states:
        for g in gamma:
            assert eval(filt.model, filt.state_map[s], g) == eval(model, s, g)
    assert global_truth(filt.model, f) == global_truth(model, f)
    assert set(filt.model.signature) == set(modal_signature(f))
