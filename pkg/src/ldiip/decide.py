"""Deciding validity by searching for small counter-models.

``f`` is valid iff ``¬f`` has no model.  Truth of a formula at a state
only depends on the states reachable along the modality paths written in
the formula, so the search builds exactly those states: it walks the
paths of ``¬f`` from a root, choosing for each step either an existing
state or a fresh one, and finally routes every unexplored transition to
some state that knows the message (adding one sink state when none
does).  A counter-model with ``n`` states therefore shows up in the
search at size at most ``n``, and the search is exhaustive once it has
allowed one state per path plus the sink.

Propositional valuations are not enumerated one by one: each frame is
evaluated for all valuations at once with big-integer truth tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Union

from .knowledge import DEFAULT_CLOSURE, Closure
from .model import (
    FiniteModel,
    eval,
    knowledge_profiles,
    message_universe,
    observed_knowledge,
    truth_masks,
    validate_interface,
    valuation_from_index,
)
from .syntax import (
    And,
    Formula,
    Knows,
    Message,
    Not,
    Prop,
    Proves,
    agents_of,
    knowledge_atoms,
    modal_signature,
    props_of,
    subformula_closure,
)

DEFAULT_CEILING = 1 << 16


class BoundTooLarge(ValueError):
    """The exhaustive bound exceeds the configured ceiling."""


@dataclass(frozen=True)
class Valid:
    bound: int

    def __str__(self) -> str:
        return "Valid"


@dataclass(frozen=True)
class ValidUpTo:
    max_states: int

    def __str__(self) -> str:
        return f"ValidUpTo({self.max_states})"


@dataclass(frozen=True)
class CounterModel:
    model: FiniteModel
    state: str

    def __str__(self) -> str:
        return f"CounterModel at {self.state}"


@dataclass(frozen=True)
class CounterWitness:
    """Counter-model found on the compiled normal form."""

    model: FiniteModel
    state: str

    def __str__(self) -> str:
        return f"CounterWitness at {self.state}"


Verdict = Union[Valid, ValidUpTo, CounterModel]


# ---------------------------------------------------------------------------
# Paths


def modal_paths(f: Formula) -> list[tuple[int, tuple[Message, str]]]:
    """Distinct modality paths of ``f`` in breadth-first order.

    Entry ``k`` is ``(parent, (msg, agent))``; entry 0 is the root and
    has parent ``-1``.
    """
    found: dict[tuple, None] = {(): None}

    def walk(g: Formula, path: tuple) -> None:
        if isinstance(g, Not):
            walk(g.body, path)
        elif isinstance(g, And):
            walk(g.left, path)
            walk(g.right, path)
        elif isinstance(g, Proves):
            child = path + ((g.msg, g.agent),)
            found.setdefault(child)
            walk(g.body, child)

    walk(f, ())
    paths = sorted(found, key=len)
    index = {p: i for i, p in enumerate(paths)}
    return [(-1, None) if not p else (index[p[:-1]], p[-1]) for p in paths]  # type: ignore[misc]


def path_bound(f: Formula) -> int:
    """States sufficient for any model of ``f``: one per path plus a sink."""
    return len(modal_paths(f)) + 1


def exhaustive_bound(f: Formula) -> int:
    """``2 ** |subformula closure of ¬f|``, the bound for definitive verdicts."""
    return 1 << len(subformula_closure(Not(f)))


# ---------------------------------------------------------------------------
# Path-generated frames


def _state_profiles(f: Formula, closure: Closure):
    observed = observed_knowledge(modal_signature(f), knowledge_atoms(f))
    universe = message_universe(observed)
    agents = list(observed)
    per_agent = [knowledge_profiles(a, observed[a], universe, closure) for a in agents]
    return agents, universe, list(itertools.product(*per_agent))


def _path_frames(f: Formula, size: int, closure: Closure, fresh_only: bool) -> Iterator[tuple[FiniteModel, int]]:
    """Frames generated by the paths of ``f`` with exactly ``size`` states.

    Yields ``(frame, image_size)``; the first ``image_size`` states are
    the images of paths, any remaining one is the sink.  With
    ``fresh_only`` every step to a state not knowing the message goes to
    a fresh state (tree unravelling).
    """
    agents, universe, profiles = _state_profiles(f, closure)
    pos = {a: i for i, a in enumerate(agents)}
    sig = modal_signature(f)
    nodes = modal_paths(f)
    chosen: list = []
    assign = [0] * len(nodes)
    succ: dict[tuple[int, Message, str], int] = {}

    def knows(s: int, m: Message, a: str) -> bool:
        return m in chosen[s][pos[a]][0]

    def finish() -> Iterator[tuple[FiniteModel, int]]:
        n = len(chosen)
        need_sink = False
        full = dict(succ)
        for m, a in sig:
            good = [t for t in range(n) if knows(t, m, a)]
            for s in range(n):
                if (s, m, a) in full:
                    continue
                if knows(s, m, a):
                    full[(s, m, a)] = s
                elif good:
                    full[(s, m, a)] = good[0]
                else:
                    full[(s, m, a)] = n
                    need_sink = True
        total = n + 1 if need_sink else n
        if total != size:
            return
        names = tuple(f"s{i}" for i in range(total))
        trans = {(m, a): {} for m, a in sig}
        for (s, m, a), t in full.items():
            trans[(m, a)][names[s]] = frozenset([names[t]])
        bases = {}
        for s in range(n):
            for a, (_, base) in zip(agents, chosen[s]):
                if base:
                    bases[(a, names[s])] = base
        if need_sink:
            sink = names[n]
            for m, a in sig:
                trans[(m, a)][sink] = frozenset([sink])
            for a in agents:
                bases[(a, sink)] = frozenset(universe)
        yield FiniteModel(names, trans, bases, {}, closure), n

    def rec(k: int) -> Iterator[tuple[FiniteModel, int]]:
        if k == len(nodes):
            yield from finish()
            return
        parent, (m, a) = nodes[k]
        s = assign[parent]
        key = (s, m, a)
        if key in succ:
            assign[k] = succ[key]
            yield from rec(k + 1)
            return
        if knows(s, m, a):
            targets = [s]
        elif fresh_only:
            targets = []
        else:
            targets = [t for t in range(len(chosen)) if knows(t, m, a)]
        for t in targets:
            succ[key] = t
            assign[k] = t
            yield from rec(k + 1)
        if not knows(s, m, a) and len(chosen) < size:
            for p in profiles:
                if m in p[pos[a]][0]:
                    chosen.append(p)
                    succ[key] = assign[k] = len(chosen) - 1
                    yield from rec(k + 1)
                    chosen.pop()
        succ.pop(key, None)

    for p in profiles:
        chosen[:] = [p]
        succ.clear()
        yield from rec(1)


def _first_model(f: Formula, max_states: int, closure: Closure, fresh_only: bool):
    atoms = props_of(f)
    for size in range(1, max_states + 1):
        for frame, image in _path_frames(f, size, closure, fresh_only):
            free = frame.states[:image]
            mask = truth_masks(frame, f, atoms, free)["s0"]
            if mask:
                index = (mask & -mask).bit_length() - 1
                val = valuation_from_index(free, atoms, index)
                return frame.with_valuation(val), "s0"
    return None


def _checked(model: FiniteModel, state: str, f: Formula) -> None:
    report = validate_interface(model, modal_signature(f))
    if not report.ok or not eval(model, state, f):
        raise AssertionError(f"search produced an unsound witness:\n{report}")


def satisfiable(f: Formula, max_states: int, closure: Closure = DEFAULT_CLOSURE):
    """First ``(model, state)`` satisfying ``f`` with at most ``max_states`` states.

    Models are tried in order of size, so the witness is a smallest one.
    """
    if max_states < 1:
        raise ValueError("max_states must be >= 1")
    found = _first_model(f, max_states, closure, fresh_only=False)
    if found is not None:
        _checked(*found, f)
    return found


def decide(
    f: Formula,
    max_states: int | None = None,
    closure: Closure = DEFAULT_CLOSURE,
    ceiling: int = DEFAULT_CEILING,
) -> Verdict:
    """Validity of ``f``.

    Without ``max_states`` the search covers every model up to the
    exhaustive bound and the answer is definitive.  With a smaller
    ``max_states`` a failed search only yields ``ValidUpTo``.
    """
    g = Not(f)
    n = len(subformula_closure(g))
    if max_states is None:
        if (1 << n) > ceiling:
            raise BoundTooLarge(
                f"exhaustive bound 2^{n} exceeds the ceiling {ceiling}; pass max_states for a bounded check"
            )
        bound = 1 << n
        limit = min(bound, path_bound(g))
    else:
        if max_states < 1:
            raise ValueError("max_states must be >= 1")
        bound = 1 << n
        limit = min(max_states, path_bound(g))
    found = satisfiable(g, limit, closure)
    if found is not None:
        return CounterModel(*found)
    if max_states is not None and max_states < bound:
        return ValidUpTo(max_states)
    return Valid(bound)


# ---------------------------------------------------------------------------
# Single-agent compilation


def _single_agent(f: Formula) -> str:
    agents = agents_of(f)
    if len(agents) > 1:
        raise ValueError(f"compilation needs a single agent, got {', '.join(sorted(agents))}")
    return next(iter(agents), "a")


def _push(m: Message, a: str, g: Formula) -> Formula:
    """Normal form of ``[m]a g`` for ``g`` already in normal form."""
    if isinstance(g, Not):
        return Not(_push(m, a, g.body))
    if isinstance(g, And):
        return And(_push(m, a, g.left), _push(m, a, g.right))
    if isinstance(g, Proves) and g.msg == m and g.agent == a:
        return g
    return Proves(m, a, g)


def _compile(f: Formula) -> Formula:
    if isinstance(f, (Prop, Knows)):
        return f
    if isinstance(f, Not):
        return Not(_compile(f.body))
    if isinstance(f, And):
        return And(_compile(f.left), _compile(f.right))
    if isinstance(f, Proves):
        return _push(f.msg, f.agent, _compile(f.body))
    raise TypeError(f"cannot compile {f!r}")


def compile_singleton(f: Formula) -> Formula:
    """Push every proof modality down to the atoms.

    Uses ``[m]a ~φ <-> ~[m]a φ``, distribution over ``&`` and
    ``[m]a [m]a φ <-> [m]a φ``.  In the result every modality sits on an
    atom or on a chain of modalities with pairwise distinct neighbouring
    messages ending in an atom.
    """
    _single_agent(f)
    return _compile(f)


def is_compiled(f: Formula) -> bool:
    """Every modality dominates an atom or another modality for a different message."""
    if isinstance(f, Not):
        return is_compiled(f.body)
    if isinstance(f, And):
        return is_compiled(f.left) and is_compiled(f.right)
    if isinstance(f, Proves):
        b = f.body
        if isinstance(b, (Prop, Knows)):
            return True
        if isinstance(b, Proves) and (b.msg, b.agent) != (f.msg, f.agent):
            return is_compiled(b)
        return False
    return True


def decide_via_compilation(f: Formula, closure: Closure = DEFAULT_CLOSURE) -> Union[Valid, CounterWitness]:
    """Compile, then search tree-shaped models of the negated normal form.

    In a tree model every step to a state that does not already know
    the message goes to a fresh state.  Tree unravelling preserves truth
    at the root, so trying every tree of at most one state per path plus
    a sink is exhaustive.
    """
    g = Not(compile_singleton(f))
    found = _first_model(g, path_bound(g), closure, fresh_only=True)
    if found is None:
        return Valid(path_bound(g))
    _checked(*found, g)
    return CounterWitness(*found)


def agrees(v1, v2) -> bool:
    """Do two verdicts agree on validity?"""
    ok1 = isinstance(v1, (Valid, ValidUpTo))
    ok2 = isinstance(v2, (Valid, ValidUpTo))
    return ok1 == ok2


__all__ = [
    "BoundTooLarge",
    "CounterModel",
    "CounterWitness",
    "DEFAULT_CEILING",
    "Valid",
    "ValidUpTo",
    "agrees",
    "compile_singleton",
    "decide",
    "decide_via_compilation",
    "exhaustive_bound",
    "is_compiled",
    "modal_paths",
    "path_bound",
    "satisfiable",
]
