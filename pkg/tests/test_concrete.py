import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ldiip.concrete import (
    ZERO,
    Recv,
    accessible,
    check_concrete_interface,
    eval_concrete,
    msgs,
    parse_state,
    render_state,
    states_up_to,
    step,
)
from ldiip.knowledge import IDENTITY
from ldiip.syntax import And, Atom, Knows, Not, Pair, ParseError, Prop, Proves, Sig, false, parse_formula

from .strategies import formulas, messages

a, b, m = Atom("a"), Atom("b"), Atom("m")
ALPHABET = [a, m, Pair(a, m), Sig(m, "b")]

concrete_states = st.recursive(
    st.just(ZERO),
    lambda prev: st.builds(Recv, st.sampled_from(["a", "b"]), messages, prev),
    max_leaves=3,
)


def test_msgs():
    assert msgs("a", ZERO) == frozenset()
    assert msgs("a", Recv("a", m, ZERO)) == {m}
    assert msgs("a", Recv("b", m, ZERO)) == frozenset()


def test_step():
    assert step("a", a, ZERO) == ZERO
    assert step("a", m, ZERO) == Recv("a", m, ZERO)
    s = Recv("a", m, ZERO)
    assert step("a", m, s) == s
    # what can be derived is not requested again
    assert step("a", Pair(m, a), s) == s


def test_accessible():
    assert accessible("a", a, ZERO, ZERO)
    assert accessible("a", m, ZERO, Recv("a", m, ZERO))
    assert not accessible("a", m, ZERO, Recv("b", m, ZERO))


def test_eval_examples():
    states = states_up_to(2, ["a", "b"], [m, Sig(m, "b")])
    sk = parse_formula("[m]a (a knows m)")
    pc = Not(Proves(m, "a", false()))
    for s in states:
        assert eval_concrete(sk, s)
        assert eval_concrete(pc, s)
    assert not eval_concrete(Knows("a", b), ZERO)


def test_valuation_forms():
    s = Recv("a", m, ZERO)
    f = Proves(m, "a", Prop("P"))
    assert not eval_concrete(f, ZERO)
    assert eval_concrete(f, ZERO, {"P": {s}})
    assert eval_concrete(f, ZERO, {"P": lambda t: t != ZERO})


@given(st.sampled_from(["a", "b"]), messages, concrete_states)
def test_step_idempotent(agent, msg, s):
    t = step(agent, msg, s)
    assert step(agent, msg, t) == t


@settings(deadline=None)
@given(formulas, concrete_states, st.sampled_from(["a", "b"]), messages)
def test_modal_clause_is_functional_and_distributive(f, s, agent, msg):
    g = Prop("Q")
    val = {"P": lambda t: len(msgs("a", t)) % 2 == 1, "Q": lambda t: t == ZERO}
    box = lambda h: eval_concrete(Proves(msg, agent, h), s, val)  # noqa: E731
    succ = step(agent, msg, s)
    assert box(f) == eval_concrete(f, succ, val)
    assert box(Not(f)) == (not box(f))
    assert box(And(f, g)) == (box(f) and box(g))


def test_interface_small_universes():
    assert check_concrete_interface(0, ["a"], [a]).ok
    report = check_concrete_interface(2, ["a", "b"], [a, b, Pair(a, b)])
    assert report.ok and report.checked > 0


def test_interface_identity_strategy():
    # without data mining the four properties still hold
    assert check_concrete_interface(2, ["a", "b"], ALPHABET, IDENTITY).ok


def test_state_text():
    s = Recv("a", Pair(m, a), Recv("b", Sig(m, "b"), ZERO))
    text = render_state(s)
    assert text == "recv(a, (m, a), recv(b, sig(m, b), 0))"
    assert parse_state(text) == s
    assert parse_state("0") == ZERO
    with pytest.raises(ParseError):
        parse_state("recv(z, m, 0)", agents=("a", "b"))


def test_states_up_to_count():
    assert len(states_up_to(2, ["a", "b"], ALPHABET)) == 1 + 8 + 64
    assert len(set(states_up_to(2, ["a", "b"], ALPHABET))) == 73


def test_pairwise_distributivity_exhaustive():
    forms = [Prop("P"), Knows("b", m), Proves(m, "a", Prop("P"))]
    val = {"P": lambda t: msgs("b", t) == frozenset()}
    for s, f, g in itertools.product(states_up_to(1, ["a", "b"], ALPHABET), forms, forms):
        both = eval_concrete(Proves(Sig(m, "b"), "a", And(f, g)), s, val)
        each = eval_concrete(Proves(Sig(m, "b"), "a", f), s, val) and eval_concrete(
            Proves(Sig(m, "b"), "a", g), s, val
        )
        assert both == each
