"""Agent knowledge: the data-mining closure over a message base.

An agent ``a`` with raw data ``D`` knows every message in the least set
containing ``{a} ∪ D`` and closed under pairing, unpairing, signing with
``a``'s own key and opening anybody's signature.  That set is infinite, so
membership is decided in two phases: :func:`analyze` saturates the base
under the decomposition rules (a finite fixpoint over subterms), then
:func:`derivable` checks top-down whether the goal can be synthesised
from the analysed base.

:func:`closure_members` is a deliberately naive second route: it runs the
rule iteration literally, with synthesis cut off at a size bound.  The
tests use it as an oracle for :func:`derivable`.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable

from .syntax import Atom, Message, Pair, Sig, message_size

DataBase = frozenset


def analyze(agent: str, base: Iterable[Message]) -> frozenset[Message]:
    """Least superset of ``base ∪ {agent}`` closed under the analysis rules.

    ``Sig(M, b)`` yields ``Pair(M, b)``, which unpairing then splits.
    """
    seen = set(base)
    seen.add(Atom(agent))
    todo = list(seen)
    while todo:
        t = todo.pop()
        if isinstance(t, Pair):
            new = (t.left, t.right)
        elif isinstance(t, Sig):
            new = (Pair(t.body, Atom(t.signer)),)
        else:
            continue
        for n in new:
            if n not in seen:
                seen.add(n)
                todo.append(n)
    return frozenset(seen)


@lru_cache(maxsize=65536)
def _analyzed(agent: str, base: frozenset) -> frozenset:
    return analyze(agent, base)


def _synth(agent: str, known: frozenset, m: Message) -> bool:
    if m in known:
        return True
    if isinstance(m, Pair):
        return _synth(agent, known, m.left) and _synth(agent, known, m.right)
    if isinstance(m, Sig):
        return m.signer == agent and _synth(agent, known, m.body)
    return False


def derivable(agent: str, base: Iterable[Message], m: Message) -> bool:
    """Decide ``m ∈ cl_agent(base)``."""
    return _synth(agent, _analyzed(agent, frozenset(base)), m)


def closure_members(agent: str, base: Iterable[Message], size_bound: int) -> frozenset[Message]:
    """Every member of ``cl_agent(base)`` of size at most ``size_bound``.

    Runs the closure rules round by round from ``{agent} ∪ base``.
    Synthesised terms larger than the bound are dropped: analysing a
    synthesised term only gives back its components, so no small member
    is reachable solely through a large one.
    """
    if size_bound < 1:
        raise ValueError("size_bound must be >= 1")
    agent_atom = Atom(agent)
    known = set(base) | {agent_atom}
    while True:
        new = set()
        for t in known:
            if isinstance(t, Pair):
                new.update((t.left, t.right))
            elif isinstance(t, Sig):
                new.add(Pair(t.body, Atom(t.signer)))
            if message_size(t) + 2 <= size_bound:
                new.add(Sig(t, agent))
        small = [t for t in known if message_size(t) <= size_bound - 2]
        for x, y in itertools.product(small, repeat=2):
            if message_size(x) + message_size(y) + 1 <= size_bound:
                new.add(Pair(x, y))
        if new <= known:
            break
        known |= new
    return frozenset(t for t in known if message_size(t) <= size_bound)


def all_terms(atoms: Iterable[str], signers: Iterable[str], size_bound: int) -> list[Message]:
    """All terms over ``atoms`` with signatures by ``signers``, up to a size."""
    atoms = sorted(set(atoms))
    signers = sorted(set(signers))
    by_size: dict[int, list[Message]] = {1: [Atom(x) for x in atoms]}
    for n in range(2, size_bound + 1):
        terms: list[Message] = []
        if n - 2 >= 1:
            terms += [Sig(t, s) for t in by_size.get(n - 2, []) for s in signers]
        for k in range(1, n - 1):
            for x in by_size.get(k, []):
                for y in by_size.get(n - 1 - k, []):
                    terms.append(Pair(x, y))
        by_size[n] = terms
    return [t for n in sorted(by_size) for t in by_size[n]]


class Closure:
    """Knowledge strategy: decides whether a message is known from a base."""

    name = "table1"

    def derivable(self, agent: str, base: Iterable[Message], m: Message) -> bool:
        return derivable(agent, base, m)

    def __repr__(self) -> str:
        return f"<Closure {self.name}>"


class IdentityClosure(Closure):
    """No data mining: an agent knows its own name and its raw data only."""

    name = "identity"

    def derivable(self, agent: str, base: Iterable[Message], m: Message) -> bool:
        return m == Atom(agent) or m in frozenset(base)


DEFAULT_CLOSURE = Closure()
IDENTITY = IdentityClosure()

STRATEGIES = {"table1": DEFAULT_CLOSURE, "identity": IDENTITY}
