"""Random formulas and random interface-valid models (for tests and demos)."""

from __future__ import annotations

import random
from typing import Sequence

from .knowledge import DEFAULT_CLOSURE, Closure
from .model import FiniteModel, message_universe, observed_knowledge
from .syntax import And, Formula, Iff, Implies, Knows, Message, Not, Or, Prop, Proves


def random_formula(
    rng: random.Random,
    props: Sequence[str],
    modalities: Sequence[tuple[Message, str]],
    knowledge: Sequence[tuple[str, Message]] = (),
    depth: int = 2,
    size: int = 6,
) -> Formula:
    """A formula of modal depth at most ``depth`` using only the given vocabulary.

    ``size`` roughly bounds the number of connectives.
    """
    def leaf() -> Formula:
        if knowledge and rng.random() < 0.3:
            a, m = rng.choice(list(knowledge))
            return Knows(a, m)
        return Prop(rng.choice(list(props)))

    def go(d: int, budget: int) -> Formula:
        if budget <= 0 or rng.random() < 0.2:
            return leaf()
        choices = ["not", "and", "or", "imp", "iff"]
        if d > 0 and modalities:
            choices += ["box", "box"]
        op = rng.choice(choices)
        if op == "not":
            return Not(go(d, budget - 1))
        if op == "box":
            m, a = rng.choice(list(modalities))
            return Proves(m, a, go(d - 1, budget - 1))
        half = (budget - 1) // 2
        left, right = go(d, half), go(d, budget - 1 - half)
        return {"and": And, "or": Or, "imp": Implies, "iff": Iff}[op](left, right)

    return go(depth, size)


def random_model(
    rng: random.Random,
    max_states: int,
    modalities: Sequence[tuple[Message, str]],
    props: Sequence[str] = ("P", "Q"),
    knowledge: Sequence[tuple[str, Message]] = (),
    closure: Closure = DEFAULT_CLOSURE,
) -> FiniteModel:
    """A random model satisfying the four accessibility properties.

    Bases are random subsets of the message universe; a message nobody
    knows is planted in one random base so that every relation has
    somewhere to go.  Transitions are drawn afterwards: loops where the
    message is known, otherwise a random state that knows it.
    """
    n = rng.randint(1, max_states)
    states = tuple(f"s{i}" for i in range(n))
    observed = observed_knowledge(modalities, knowledge)
    universe = message_universe(observed)
    bases: dict[tuple[str, str], set] = {
        (a, s): {m for m in universe if rng.random() < 0.3} for a in observed for s in states
    }

    def knows(a: str, m: Message, s: str) -> bool:
        return closure.derivable(a, bases[(a, s)], m)

    for m, a in modalities:
        if not any(knows(a, m, s) for s in states):
            bases[(a, rng.choice(states))].add(m)
    trans = {}
    for m, a in modalities:
        good = [s for s in states if knows(a, m, s)]
        trans[(m, a)] = {s: frozenset([s if s in good else rng.choice(good)]) for s in states}
    val = {p: frozenset(s for s in states if rng.random() < 0.5) for p in props}
    return FiniteModel(
        states, trans, {k: frozenset(v) for k, v in bases.items() if v}, val, closure
    )
