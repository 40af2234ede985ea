"""Finite Kripke models, their evaluator, filtration and enumeration.

A :class:`FiniteModel` never stores the truth of knowledge atoms: the
truth of ``a knows M`` at ``s`` is recomputed from the per-state message
base of ``a`` through the model's closure strategy.  Ordinary
propositions are stored as sets of states.

Model files are plain text with four sections::

    STATES
    s0 s1
    TRANS
    m a : s0 -> s1
    m a : s1 -> s1
    BASES
    a @ s1 : m
    VAL
    P : s1
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .interface import InterfaceReport, Violation
from .knowledge import DEFAULT_CLOSURE, Closure
from .syntax import (
    And,
    Atom,
    Formula,
    Knows,
    Message,
    Not,
    Prop,
    Proves,
    _Parser,
    knowledge_atoms,
    modal_signature,
    props_of,
    render_message,
    sort_key,
    subformula_closure,
    subterms,
)

Signature = Sequence[tuple[Message, str]]


class ModelError(ValueError):
    """A formula mentions a proposition or modality the model lacks."""


class ModelFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=True)
class FiniteModel:
    states: tuple[str, ...]
    trans: Mapping[tuple[Message, str], Mapping[str, frozenset[str]]]
    bases: Mapping[tuple[str, str], frozenset[Message]] = field(default_factory=dict)
    prop_val: Mapping[str, frozenset[str]] = field(default_factory=dict)
    closure: Closure = field(default=DEFAULT_CLOSURE, compare=False)

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def build(cls, states, trans=None, bases=None, val=None, closure: Closure = DEFAULT_CLOSURE) -> "FiniteModel":
        """Normalising constructor.

        ``trans`` maps ``(msg, agent)`` to ``{state: successor}`` where a
        successor is a state name or an iterable of them.
        """
        states = tuple(states)
        norm_trans = {}
        for key, rel in (trans or {}).items():
            norm_trans[key] = {
                s: frozenset([t] if isinstance(t, str) else t) for s, t in rel.items()
            }
        norm_bases = {k: frozenset(v) for k, v in (bases or {}).items() if v}
        norm_val = {p: frozenset(v) for p, v in (val or {}).items()}
        return cls(states, norm_trans, norm_bases, norm_val, closure)

    @property
    def signature(self) -> list[tuple[Message, str]]:
        return list(self.trans)

    def base(self, agent: str, s: str) -> frozenset[Message]:
        return self.bases.get((agent, s), frozenset())

    def knows(self, agent: str, m: Message, s: str) -> bool:
        return self.closure.derivable(agent, self.base(agent, s), m)

    def successors(self, m: Message, agent: str, s: str) -> frozenset[str]:
        try:
            rel = self.trans[(m, agent)]
        except KeyError:
            raise ModelError(f"model has no relation for [{render_message(m)}]{agent}") from None
        return rel.get(s, frozenset())

    def successor(self, m: Message, agent: str, s: str) -> str:
        (t,) = self.successors(m, agent, s)
        return t

    def with_valuation(self, val: Mapping[str, Iterable[str]]) -> "FiniteModel":
        return FiniteModel(
            self.states, self.trans, self.bases, {p: frozenset(v) for p, v in val.items()}, self.closure
        )

    def __str__(self) -> str:
        return render_model(self)


# ---------------------------------------------------------------------------
# Satisfaction


def eval(model: FiniteModel, s: str, f: Formula) -> bool:  # noqa: A001 - mirrors the semantics' name
    """Truth of ``f`` at state ``s`` of ``model``."""
    if isinstance(f, Prop):
        try:
            return s in model.prop_val[f.name]
        except KeyError:
            raise ModelError(f"model has no valuation for {f.name}") from None
    if isinstance(f, Knows):
        return model.knows(f.agent, f.msg, s)
    if isinstance(f, Not):
        return not eval(model, s, f.body)
    if isinstance(f, And):
        return eval(model, s, f.left) and eval(model, s, f.right)
    if isinstance(f, Proves):
        return all(eval(model, t, f.body) for t in model.successors(f.msg, f.agent, s))
    raise TypeError(f"cannot evaluate {f!r}")


def global_truth(model: FiniteModel, f: Formula) -> bool:
    return all(eval(model, s, f) for s in model.states)


def validate_interface(model: FiniteModel, signature: Iterable[tuple[Message, str]] | None = None) -> InterfaceReport:
    """Check seriality, functionality, conditional reflexivity and epistemic image.

    A signature entry missing from the model counts as the empty relation.
    """
    sig = list(model.trans) if signature is None else list(signature)
    report = InterfaceReport()
    known_states = set(model.states)
    for m, a in sig:
        rel = model.trans.get((m, a), {})
        for s in model.states:
            report.checked += 1
            succ = rel.get(s, frozenset())
            stray = succ - known_states
            if stray:
                report.violations.append(
                    Violation("seriality", m, a, s, f"unknown successor(s) {', '.join(sorted(stray))}")
                )
                succ = succ & known_states
            if not succ:
                report.violations.append(Violation("seriality", m, a, s, "no successor"))
            if len(succ) > 1:
                report.violations.append(Violation("functionality", m, a, s, " ".join(sorted(succ))))
            if model.knows(a, m, s) and s not in succ:
                report.violations.append(
                    Violation("conditional-reflexivity", m, a, s, f"{a} knows it but no loop")
                )
            for t in sorted(succ):
                if not model.knows(a, m, t):
                    report.violations.append(Violation("epistemic-image", m, a, s, f"{a} does not know it at {t}"))
    return report


# ---------------------------------------------------------------------------
# Filtration


@dataclass(frozen=True)
class Filtration:
    model: FiniteModel
    state_map: Mapping[str, str]
    gamma: tuple[Formula, ...]


def filtrate(model: FiniteModel, f: Formula) -> Filtration:
    """Quotient ``model`` by agreement on the subformulas of ``f``.

    States are identified when they agree on every subformula of ``f``
    and on ``a knows M`` for every modality ``[M]a`` of ``f``.  Each class
    is named after, and inherits its message bases from, its first member.
    The class of ``s`` steps to the class of its first member's successor;
    as successors are unique this keeps the relation functional.
    Propositions hold at a class when they hold at some member.
    """
    sig = modal_signature(f)
    report = validate_interface(model, sig)
    if not report.ok:
        raise ValueError(f"model violates the accessibility interface:\n{report}")
    gamma = sorted(subformula_closure(f), key=sort_key)
    extra = [Knows(a, m) for m, a in sig if Knows(a, m) not in gamma]
    keyed = gamma + sorted(extra, key=sort_key)

    rep_of_key: dict[tuple[bool, ...], str] = {}
    state_map: dict[str, str] = {}
    for s in model.states:
        key = tuple(eval(model, s, g) for g in keyed)
        state_map[s] = rep_of_key.setdefault(key, s)
    reps = tuple(dict.fromkeys(state_map.values()))

    trans = {
        (m, a): {r: frozenset([state_map[model.successor(m, a, r)]]) for r in reps} for m, a in sig
    }
    bases = {(a, s): base for (a, s), base in model.bases.items() if s in reps}
    val = {p: frozenset(state_map[s] for s in states) for p, states in model.prop_val.items()}
    quotient = FiniteModel(reps, trans, bases, val, model.closure)
    return Filtration(quotient, state_map, tuple(gamma))


# ---------------------------------------------------------------------------
# Knowledge profiles and enumeration


def observed_knowledge(
    signature: Iterable[tuple[Message, str]], knowledge: Iterable[tuple[str, Message]] = ()
) -> dict[str, tuple[Message, ...]]:
    """Per agent, the messages whose knowledge an evaluation can observe."""
    out: dict[str, dict[Message, None]] = {}
    for m, a in signature:
        out.setdefault(a, {}).setdefault(m)
    for a, m in knowledge:
        out.setdefault(a, {}).setdefault(m)
    return {a: tuple(ms) for a, ms in sorted(out.items())}


def message_universe(observed: Mapping[str, Sequence[Message]]) -> tuple[Message, ...]:
    """Subterms of the observed messages plus the observing agents."""
    terms: set[Message] = {Atom(a) for a in observed}
    for ms in observed.values():
        for m in ms:
            terms |= subterms(m)
    return tuple(sorted(terms, key=lambda t: (render_message(t).count("("), render_message(t))))


@lru_cache(maxsize=4096)
def knowledge_profiles(
    agent: str, observed: tuple[Message, ...], universe: tuple[Message, ...], closure: Closure = DEFAULT_CLOSURE
) -> tuple[tuple[frozenset[Message], frozenset[Message]], ...]:
    """Distinct sets of observed messages an agent can know, with a witness base.

    Bases range over subsets of ``universe``; profiles are deduplicated by
    the set of observed messages they make known, keeping the smallest base.
    """
    seen: dict[frozenset[Message], frozenset[Message]] = {}
    limit = 1 << len(observed)
    for k in range(len(universe) + 1):
        for combo in itertools.combinations(universe, k):
            known = frozenset(m for m in observed if closure.derivable(agent, combo, m))
            if known not in seen:
                seen[known] = frozenset(combo)
        if len(seen) == limit:
            break
    return tuple((known, base) for known, base in seen.items())


def enumerate_frames(
    signature: Signature,
    max_states: int,
    knowledge: Iterable[tuple[str, Message]] = (),
    closure: Closure = DEFAULT_CLOSURE,
    min_states: int = 1,
) -> Iterator[FiniteModel]:
    """All interface-valid frames (models without valuation) up to a size.

    Transitions are total functions; states that know ``M`` loop on
    ``[M]a`` and every other state steps to some state knowing ``M``.
    Isomorphic copies are not removed.
    """
    if max_states < 1:
        raise ValueError("max_states must be >= 1")
    signature = list(dict.fromkeys(signature))
    observed = observed_knowledge(signature, knowledge)
    universe = message_universe(observed)
    agents = list(observed)
    profiles = [knowledge_profiles(a, observed[a], universe, closure) for a in agents]
    per_state = list(itertools.product(*profiles))
    for n in range(min_states, max_states + 1):
        states = tuple(f"s{i}" for i in range(n))
        for choice in itertools.product(per_state, repeat=n):
            bases = {}
            known = {}
            for s, prof in zip(states, choice):
                for a, (kn, base) in zip(agents, prof):
                    if base:
                        bases[(a, s)] = base
                    known[(a, s)] = kn
            options = []
            for m, a in signature:
                good = [s for s in states if m in known[(a, s)]]
                if not good:
                    break
                options.append([(s,) if s in good else good for s in states])
            else:
                flat = [opt for per_pair in options for opt in per_pair]
                for targets in itertools.product(*[[t for t in o] for o in flat]):
                    trans = {}
                    it = iter(targets)
                    for m, a in signature:
                        trans[(m, a)] = {s: frozenset([next(it)]) for s in states}
                    yield FiniteModel(states, trans, bases, {}, closure)


def valuations(states: Sequence[str], atoms: Sequence[str]) -> Iterator[dict[str, frozenset[str]]]:
    """Every assignment of state sets to ``atoms``, in valuation-index order."""
    k = len(atoms)
    for index in range(1 << (len(states) * k)):
        yield valuation_from_index(states, atoms, index)


def valuation_from_index(states: Sequence[str], atoms: Sequence[str], index: int) -> dict[str, frozenset[str]]:
    k = len(atoms)
    return {
        p: frozenset(s for i, s in enumerate(states) if (index >> (i * k + j)) & 1)
        for j, p in enumerate(atoms)
    }


def enumerate_models(
    signature: Signature,
    atoms: Sequence[str],
    max_states: int,
    knowledge: Iterable[tuple[str, Message]] = (),
    closure: Closure = DEFAULT_CLOSURE,
) -> Iterator[FiniteModel]:
    """Every interface-valid model up to ``max_states`` states.

    Message bases are drawn from subsets of the subterms of the observed
    messages and deduplicated by the knowledge they induce on the
    modalities in ``signature`` and the atoms in ``knowledge``.
    """
    for frame in enumerate_frames(signature, max_states, knowledge, closure):
        for val in valuations(frame.states, atoms):
            yield frame.with_valuation(val)


def formula_frames(f: Formula, max_states: int, closure: Closure = DEFAULT_CLOSURE) -> Iterator[FiniteModel]:
    return enumerate_frames(modal_signature(f), max_states, knowledge_atoms(f), closure)


# ---------------------------------------------------------------------------
# Evaluation under all valuations at once


def _bit_mask(bit: int, nbits: int) -> int:
    """Integer whose i-th bit is bit ``bit`` of i, for i < 2**nbits."""
    half = 1 << bit
    period = half << 1
    block = ((1 << half) - 1) << half
    reps = (1 << nbits) // period
    return block * (((1 << (period * reps)) - 1) // ((1 << period) - 1))


def truth_masks(
    frame: FiniteModel, f: Formula, atoms: Sequence[str], free_states: Sequence[str] | None = None
) -> dict[str, int]:
    """Truth of ``f`` at each state for every valuation of ``atoms``.

    Bit ``i`` of the result for ``s`` is the truth value under
    ``valuation_from_index(free_states, atoms, i)``.  ``free_states``
    defaults to all states; atoms are false at the others.
    """
    free = frame.states if free_states is None else tuple(free_states)
    k = len(atoms)
    nbits = len(free) * k
    full = (1 << (1 << nbits)) - 1
    atom_index = {p: j for j, p in enumerate(atoms)}
    state_index = {s: i for i, s in enumerate(free)}
    memo: dict[tuple[Formula, str], int] = {}

    def go(g: Formula, s: str) -> int:
        key = (g, s)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(g, Prop):
            if g.name not in atom_index:
                raise ModelError(f"no valuation bits for {g.name}")
            r = _bit_mask(state_index[s] * k + atom_index[g.name], nbits) if s in state_index else 0
        elif isinstance(g, Knows):
            r = full if frame.knows(g.agent, g.msg, s) else 0
        elif isinstance(g, Not):
            r = full ^ go(g.body, s)
        elif isinstance(g, And):
            r = go(g.left, s)
            if r:
                r &= go(g.right, s)
        elif isinstance(g, Proves):
            r = full
            for t in frame.successors(g.msg, g.agent, s):
                r &= go(g.body, t)
        else:
            raise TypeError(f"cannot evaluate {g!r}")
        memo[key] = r
        return r

    return {s: go(f, s) for s in frame.states}


def small_countermodel(
    f: Formula, max_states: int, premises: Sequence[Formula] = (), closure: Closure = DEFAULT_CLOSURE
) -> tuple[FiniteModel, str] | None:
    """Brute-force search for a model where every premise holds globally but ``f`` fails somewhere.

    Covers every frame up to ``max_states`` states over the modalities and
    knowledge atoms of ``f`` and the premises, and every valuation.
    """
    everything = [*premises, f]
    sig = list(dict.fromkeys(x for g in everything for x in modal_signature(g)))
    knowledge = list(dict.fromkeys(x for g in everything for x in knowledge_atoms(g)))
    atoms = sorted(set().union(*(props_of(g) for g in everything)))
    for frame in enumerate_frames(sig, max_states, knowledge, closure):
        nbits = len(frame.states) * len(atoms)
        good = (1 << (1 << nbits)) - 1
        for p in premises:
            for mask in truth_masks(frame, p, atoms).values():
                good &= mask
        if not good:
            continue
        for s, mask in truth_masks(frame, f, atoms).items():
            bad = good & ~mask
            if bad:
                index = (bad & -bad).bit_length() - 1
                return frame.with_valuation(valuation_from_index(frame.states, atoms, index)), s
    return None


# ---------------------------------------------------------------------------
# Text format


def render_model(model: FiniteModel) -> str:
    order = {s: i for i, s in enumerate(model.states)}
    lines = ["STATES", " ".join(model.states), "TRANS"]
    for (m, a) in sorted(model.trans, key=lambda k: (render_message(k[0]), k[1])):
        rel = model.trans[(m, a)]
        for s in sorted(rel, key=order.__getitem__):
            for t in sorted(rel[s], key=order.__getitem__):
                lines.append(f"{render_message(m)} {a} : {s} -> {t}")
    lines.append("BASES")
    for (a, s) in sorted(model.bases, key=lambda k: (k[0], order[k[1]])):
        base = model.bases[(a, s)]
        if base:
            lines.append(f"{a} @ {s} : " + ", ".join(sorted(map(render_message, base))))
    lines.append("VAL")
    for p in sorted(model.prop_val):
        states = sorted(model.prop_val[p], key=order.__getitem__)
        lines.append(f"{p} :" + "".join(" " + s for s in states))
    return "\n".join(lines) + "\n"


_SECTIONS = ("STATES", "TRANS", "BASES", "VAL")


def parse_model(text: str, closure: Closure = DEFAULT_CLOSURE, agents: Sequence[str] | None = None) -> FiniteModel:
    """Parse the model text format; raises :class:`ModelFormatError`."""
    section = None
    seen_sections: list[str] = []
    states: list[str] = []
    trans: dict[tuple[Message, str], dict[str, set[str]]] = {}
    bases: dict[tuple[str, str], frozenset[Message]] = {}
    val: dict[str, frozenset[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line in _SECTIONS:
            if line in seen_sections:
                raise ModelFormatError(f"line {lineno}: duplicate section {line}")
            seen_sections.append(line)
            section = line
            continue
        try:
            if section == "STATES":
                for name in line.split():
                    if not name[0].islower() or not name.replace("_", "").isalnum():
                        raise ModelFormatError(f"bad state name {name!r}")
                    states.append(name)
            elif section == "TRANS":
                p = _Parser(line, agents, schema=False)
                m = p.message()
                a = p.agent()
                p.eat(":")
                s = p.eat("lower").text
                p.eat("->")
                t = p.eat("lower").text
                if p.tok.kind != "eof":
                    raise p.error("unexpected token")
                trans.setdefault((m, a), {}).setdefault(s, set()).add(t)
            elif section == "BASES":
                p = _Parser(line, agents, schema=False)
                a = p.agent()
                p.eat("@")
                s = p.eat("lower").text
                p.eat(":")
                ms = []
                if p.tok.kind != "eof":
                    ms.append(p.message())
                    while p.accept(","):
                        ms.append(p.message())
                if p.tok.kind != "eof":
                    raise p.error("unexpected token")
                bases[(a, s)] = bases.get((a, s), frozenset()) | frozenset(ms)
            elif section == "VAL":
                name, sep, rest = line.partition(":")
                name = name.strip()
                if not sep or not name or not name[0].isupper():
                    raise ModelFormatError(f"bad valuation line {line!r}")
                val[name] = frozenset(rest.split())
            else:
                raise ModelFormatError("content before the STATES section")
        except ModelFormatError as e:
            raise ModelFormatError(f"line {lineno}: {e}") from None
        except ValueError as e:
            raise ModelFormatError(f"line {lineno}: {e}") from None
    if "STATES" not in seen_sections:
        raise ModelFormatError("missing STATES section")
    if len(set(states)) != len(states):
        raise ModelFormatError("duplicate state names")
    known = set(states)
    for (m, a), rel in trans.items():
        for s, ts in rel.items():
            bad = ({s} | ts) - known
            if bad:
                raise ModelFormatError(f"TRANS mentions unknown state(s) {', '.join(sorted(bad))}")
    for (a, s) in bases:
        if s not in known:
            raise ModelFormatError(f"BASES mentions unknown state {s}")
    for p, ss in val.items():
        if ss - known:
            raise ModelFormatError(f"VAL for {p} mentions unknown state(s)")
    return FiniteModel.build(states, trans, bases, val, closure)


def describe_model(model: FiniteModel) -> str:
    """Short human summary (used in reports)."""
    return f"{len(model.states)} state(s), modalities: " + ", ".join(
        f"[{render_message(m)}]{a}" for m, a in model.trans
    )


__all__ = [
    "Filtration",
    "FiniteModel",
    "ModelError",
    "ModelFormatError",
    "describe_model",
    "enumerate_frames",
    "enumerate_models",
    "eval",
    "filtrate",
    "formula_frames",
    "global_truth",
    "knowledge_profiles",
    "message_universe",
    "observed_knowledge",
    "parse_model",
    "render_model",
    "small_countermodel",
    "truth_masks",
    "validate_interface",
    "valuation_from_index",
    "valuations",
]
