"""Concrete oracle-computational semantics.

States are finite histories: ``0`` or ``recv(a, M, s)`` ("agent a receives
M in state s").  The successor ``step(a, M, s)`` stays put when ``a``
already knows ``M`` in ``s`` and otherwise records ``M`` as oracle input.
Since the resulting accessibility is a total function, the proof modality
is evaluated by following that one successor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union

from .interface import InterfaceReport, Violation
from .knowledge import DEFAULT_CLOSURE, Closure
from .syntax import (
    And,
    Formula,
    Knows,
    Message,
    Not,
    ParseError,
    Prop,
    Proves,
    _Parser,
    render_message,
)


@dataclass(frozen=True, slots=True)
class Zero:
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True, slots=True)
class Recv:
    agent: str
    msg: Message
    prev: "State"

    def __str__(self) -> str:
        return render_state(self)


State = Union[Zero, Recv]

ZERO = Zero()


def msgs(agent: str, s: State) -> frozenset[Message]:
    """Raw data base of ``agent`` in ``s``."""
    out = set()
    while isinstance(s, Recv):
        if s.agent == agent:
            out.add(s.msg)
        s = s.prev
    return frozenset(out)


def knows(agent: str, m: Message, s: State, closure: Closure = DEFAULT_CLOSURE) -> bool:
    return closure.derivable(agent, msgs(agent, s), m)


def step(agent: str, m: Message, s: State, closure: Closure = DEFAULT_CLOSURE) -> State:
    """The oracle successor ``σ_agent^m(s)``."""
    if knows(agent, m, s, closure):
        return s
    return Recv(agent, m, s)


def accessible(agent: str, m: Message, s: State, t: State, closure: Closure = DEFAULT_CLOSURE) -> bool:
    return t == step(agent, m, s, closure)


def depth(s: State) -> int:
    n = 0
    while isinstance(s, Recv):
        n += 1
        s = s.prev
    return n


Valuation = Mapping[str, Union[Callable[[State], bool], Iterable[State]]]


def _prop_holds(name: str, s: State, valuation: Valuation | None) -> bool:
    if valuation is None or name not in valuation:
        return False
    v = valuation[name]
    if callable(v):
        return bool(v(s))
    return s in v


def eval_concrete(
    f: Formula,
    s: State,
    valuation: Valuation | None = None,
    closure: Closure = DEFAULT_CLOSURE,
) -> bool:
    """Truth of ``f`` at concrete state ``s``.

    ``valuation`` assigns ordinary propositions, either as a predicate on
    states or as a collection of states; unassigned propositions are
    false.  Knowledge atoms are always read off the closure.
    """
    if isinstance(f, Prop):
        return _prop_holds(f.name, s, valuation)
    if isinstance(f, Knows):
        return knows(f.agent, f.msg, s, closure)
    if isinstance(f, Not):
        return not eval_concrete(f.body, s, valuation, closure)
    if isinstance(f, And):
        return eval_concrete(f.left, s, valuation, closure) and eval_concrete(f.right, s, valuation, closure)
    if isinstance(f, Proves):
        return eval_concrete(f.body, step(f.agent, f.msg, s, closure), valuation, closure)
    raise TypeError(f"cannot evaluate {f!r}")


def states_up_to(depth_bound: int, agents: Sequence[str], alphabet: Sequence[Message]) -> list[State]:
    """Every state built from at most ``depth_bound`` receive events."""
    out: list[State] = [ZERO]
    frontier: list[State] = [ZERO]
    events = list(itertools.product(agents, alphabet))
    for _ in range(depth_bound):
        frontier = [Recv(a, m, s) for s in frontier for a, m in events]
        out += frontier
    return out


def check_concrete_interface(
    depth_bound: int,
    agents: Sequence[str],
    alphabet: Sequence[Message],
    closure: Closure = DEFAULT_CLOSURE,
) -> InterfaceReport:
    """Exhaustively check the four accessibility properties on small states."""
    if depth_bound < 0:
        raise ValueError("depth_bound must be >= 0")
    states = states_up_to(depth_bound, agents, alphabet)
    report = InterfaceReport()
    for s in states:
        for a in agents:
            for m in alphabet:
                report.checked += 1
                t = step(a, m, s, closure)
                # Only s itself and its m-extension can be successors; test both
                # plus one unrelated state so a sloppy relation would show up.
                candidates = {s, Recv(a, m, s), t, states[len(states) // 2]}
                hits = {u for u in candidates if accessible(a, m, s, u, closure)}
                if not hits:
                    report.violations.append(Violation("seriality", m, a, s))
                if len(hits) > 1:
                    report.violations.append(
                        Violation("functionality", m, a, s, ", ".join(sorted(map(str, hits))))
                    )
                if knows(a, m, s, closure) and not accessible(a, m, s, s, closure):
                    report.violations.append(Violation("conditional-reflexivity", m, a, s))
                if not knows(a, m, t, closure):
                    report.violations.append(Violation("epistemic-image", m, a, s, f"successor {t}"))
    return report


def export_model(
    root: State,
    signature: Sequence[tuple[Message, str]],
    agents: Sequence[str],
    valuation: Valuation | None = None,
    props: Sequence[str] = (),
    closure: Closure = DEFAULT_CLOSURE,
):
    """The finite model of states reachable from ``root`` via ``signature``.

    Each step either stays put or makes its message known for good, so
    at most ``len(signature)`` receive events are ever added.  States are
    named ``s0, s1, ...`` in breadth-first order; the second result maps
    names back to histories.
    """
    from .model import FiniteModel

    order = [root]
    seen = {root: 0}
    i = 0
    while i < len(order):
        s = order[i]
        for m, a in signature:
            t = step(a, m, s, closure)
            if t not in seen:
                seen[t] = len(order)
                order.append(t)
        i += 1
    names = [f"s{k}" for k in range(len(order))]
    trans = {
        (m, a): {names[k]: frozenset([names[seen[step(a, m, s, closure)]]]) for k, s in enumerate(order)}
        for m, a in signature
    }
    bases = {(a, names[k]): msgs(a, s) for k, s in enumerate(order) for a in agents if msgs(a, s)}
    val = {p: frozenset(names[k] for k, s in enumerate(order) if _prop_holds(p, s, valuation)) for p in props}
    return FiniteModel(tuple(names), trans, bases, val, closure), dict(zip(names, order))


def render_state(s: State) -> str:
    parts = []
    while isinstance(s, Recv):
        parts.append(f"recv({s.agent}, {render_message(s.msg)}, ")
        s = s.prev
    return "".join(parts) + "0" + ")" * len(parts)


def parse_state(text: str, agents: Sequence[str] | None = None) -> State:
    """Parse ``0`` or ``recv(a, M, s)``."""
    p = _Parser(text, agents, schema=False)

    def state() -> State:
        tok = p.tok
        if tok.kind == "zero":
            p.i += 1
            return ZERO
        if tok.kind == "lower" and tok.text == "recv":
            p.i += 1
            p.eat("(")
            a = p.agent()
            p.eat(",")
            m = p.message()
            p.eat(",")
            prev = state()
            p.eat(")")
            return Recv(a, m, prev)
        raise p.error("expected state")

    s = state()
    if p.tok.kind != "eof":
        raise p.error("unexpected token")
    return s


__all__ = [
    "ZERO",
    "ParseError",
    "Recv",
    "State",
    "Zero",
    "accessible",
    "check_concrete_interface",
    "depth",
    "eval_concrete",
    "export_model",
    "knows",
    "msgs",
    "parse_state",
    "render_state",
    "states_up_to",
    "step",
]
