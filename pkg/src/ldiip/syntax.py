"""Message terms, formulas, the surface grammar and schema matching.

The formula core has exactly two Boolean connectives (``Not`` and ``And``)
plus knowledge atoms and the proof modality.  Everything else the grammar
accepts (``true``, ``false``, ``|``, ``->``, ``<->``) is expanded while
parsing, so the evaluator and the derivation checker never see a macro.

Schemas reuse the same node classes with metavariables in place of
formulas (:class:`FVar`), messages (:class:`MVar`) and agents
(:class:`AVar`).  In the surface syntax a metavariable is written ``?name``
and its sort is fixed by the position where it first occurs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

DEFAULT_AGENTS = ("a", "b")

KEYWORDS = frozenset({"knows", "sig", "true", "false"})


# ---------------------------------------------------------------------------
# Message terms


@dataclass(frozen=True, slots=True)
class AVar:
    """Agent metavariable (schemas only)."""

    name: str

    def __str__(self) -> str:
        return "?" + self.name


Agent = Union[str, AVar]


@dataclass(frozen=True, slots=True)
class Atom:
    name: Agent


@dataclass(frozen=True, slots=True)
class Pair:
    left: "Message"
    right: "Message"


@dataclass(frozen=True, slots=True)
class Sig:
    body: "Message"
    signer: Agent


@dataclass(frozen=True, slots=True)
class MVar:
    """Message metavariable (schemas only)."""

    name: str


Message = Union[Atom, Pair, Sig, MVar]


def message_size(m: Message) -> int:
    """Node count; a signature counts its signer as one node."""
    if isinstance(m, Pair):
        return 1 + message_size(m.left) + message_size(m.right)
    if isinstance(m, Sig):
        return 2 + message_size(m.body)
    return 1


def subterms(m: Message) -> set[Message]:
    """All subterms of ``m``; the signer of a signature counts as an atom."""
    out: set[Message] = set()
    stack = [m]
    while stack:
        t = stack.pop()
        if t in out:
            continue
        out.add(t)
        if isinstance(t, Pair):
            stack += [t.left, t.right]
        elif isinstance(t, Sig):
            stack += [t.body, Atom(t.signer)]
    return out


def message_agents(m: Message) -> set[Agent]:
    """Agent names occurring as signers."""
    if isinstance(m, Pair):
        return message_agents(m.left) | message_agents(m.right)
    if isinstance(m, Sig):
        return message_agents(m.body) | {m.signer}
    return set()


def render_message(m: Message) -> str:
    if isinstance(m, Atom):
        return str(m.name)
    if isinstance(m, Pair):
        return f"({render_message(m.left)}, {render_message(m.right)})"
    if isinstance(m, Sig):
        return f"sig({render_message(m.body)}, {m.signer})"
    if isinstance(m, MVar):
        return "?" + m.name
    raise TypeError(f"not a message: {m!r}")


# ---------------------------------------------------------------------------
# Formulas


class _Ops:
    """Boolean operator sugar shared by all formula nodes.

    ``~f``, ``f & g``, ``f | g`` and ``f >> g`` (implication) build core
    formulas, expanding the macros exactly as the grammar does.
    """

    __slots__ = ()

    def __invert__(self) -> "Formula":
        return Not(self)  # type: ignore[arg-type]

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)  # type: ignore[arg-type]

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)  # type: ignore[arg-type]

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)  # type: ignore[arg-type]

    def __str__(self) -> str:
        return render(self)  # type: ignore[arg-type]


@dataclass(frozen=True, slots=True)
class Prop(_Ops):
    name: str


@dataclass(frozen=True, slots=True)
class Knows(_Ops):
    agent: Agent
    msg: Message


@dataclass(frozen=True, slots=True)
class Not(_Ops):
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And(_Ops):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Proves(_Ops):
    """``[msg]agent body``: msg can prove whether or not body to agent."""

    msg: Message
    agent: Agent
    body: "Formula"


@dataclass(frozen=True, slots=True)
class FVar(_Ops):
    """Formula metavariable (schemas only)."""

    name: str


Formula = Union[Prop, Knows, Not, And, Proves, FVar]


def Or(f: Formula, g: Formula) -> Formula:
    return Not(And(Not(f), Not(g)))


def Implies(f: Formula, g: Formula) -> Formula:
    return Or(Not(f), g)


def Iff(f: Formula, g: Formula) -> Formula:
    return And(Implies(f, g), Implies(g, f))


def true(agent: Agent = "a") -> Formula:
    """``[a]a (a knows a)``, the self-knowledge instance used as truth."""
    return Proves(Atom(agent), agent, Knows(agent, Atom(agent)))


def false(agent: Agent = "a") -> Formula:
    return Not(true(agent))


def box(m: Message, agent: Agent, body: Formula) -> Formula:
    return Proves(m, agent, body)


def formula_size(f: Formula) -> int:
    if isinstance(f, Not):
        return 1 + formula_size(f.body)
    if isinstance(f, And):
        return 1 + formula_size(f.left) + formula_size(f.right)
    if isinstance(f, Proves):
        return 1 + formula_size(f.body)
    return 1


def iter_subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk, duplicates included."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, And):
            stack += [g.right, g.left]
        elif isinstance(g, Proves):
            stack.append(g.body)


def subformula_closure(f: Formula) -> frozenset[Formula]:
    return frozenset(iter_subformulas(f))


def props_of(f: Formula) -> list[str]:
    """Proposition names in first-occurrence order."""
    seen: dict[str, None] = {}
    for g in iter_subformulas(f):
        if isinstance(g, Prop):
            seen.setdefault(g.name)
    return list(seen)


def knowledge_atoms(f: Formula) -> list[tuple[Agent, Message]]:
    seen: dict[tuple[Agent, Message], None] = {}
    for g in iter_subformulas(f):
        if isinstance(g, Knows):
            seen.setdefault((g.agent, g.msg))
    return list(seen)


def modal_signature(f: Formula) -> list[tuple[Message, Agent]]:
    """The (message, agent) pairs indexing modalities of ``f``."""
    seen: dict[tuple[Message, Agent], None] = {}
    for g in iter_subformulas(f):
        if isinstance(g, Proves):
            seen.setdefault((g.msg, g.agent))
    return list(seen)


def agents_of(f: Formula) -> set[str]:
    out: set = set()
    for g in iter_subformulas(f):
        if isinstance(g, Knows):
            out.add(g.agent)
            out |= message_agents(g.msg)
        elif isinstance(g, Proves):
            out.add(g.agent)
            out |= message_agents(g.msg)
    return out


def messages_of(f: Formula) -> list[Message]:
    seen: dict[Message, None] = {}
    for g in iter_subformulas(f):
        if isinstance(g, (Knows, Proves)):
            seen.setdefault(g.msg)
    return list(seen)


def modal_depth(f: Formula) -> int:
    if isinstance(f, Not):
        return modal_depth(f.body)
    if isinstance(f, And):
        return max(modal_depth(f.left), modal_depth(f.right))
    if isinstance(f, Proves):
        return 1 + modal_depth(f.body)
    return 0


def sort_key(f: Formula) -> tuple[int, str]:
    return formula_size(f), render(f)


# ---------------------------------------------------------------------------
# Rendering


def render(f: Formula, *, _top: bool = True) -> str:
    """Core concrete syntax; ``parse_formula(render(f)) == f``."""
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, FVar):
        return "?" + f.name
    if isinstance(f, Knows):
        s = f"{f.agent} knows {render_message(f.msg)}"
        return s if _top else f"({s})"
    if isinstance(f, Not):
        if isinstance(f.body, Proves):
            return f"~({render(f.body, _top=False)})"
        return "~" + _operand(f.body, left=True)
    if isinstance(f, Proves):
        return f"[{render_message(f.msg)}]{f.agent} " + _operand(f.body, left=True)
    if isinstance(f, And):
        return f"{_operand(f.left, left=True, in_and=True)} & {_operand(f.right, left=False, in_and=True)}"
    raise TypeError(f"not a formula: {f!r}")


def _operand(f: Formula, *, left: bool, in_and: bool = False) -> str:
    if isinstance(f, (Prop, FVar, Not)):
        return render(f, _top=False)
    if isinstance(f, Proves) and not in_and:
        return render(f, _top=False)
    if isinstance(f, And) and in_and and left:
        return render(f, _top=False)
    if isinstance(f, Knows):
        return render(f, _top=False)
    return f"({render(f, _top=False)})"


def _as_true(f: Formula) -> Agent | None:
    if (
        isinstance(f, Proves)
        and isinstance(f.msg, Atom)
        and f.msg.name == f.agent
        and f.body == Knows(f.agent, f.msg)
    ):
        return f.agent
    return None


def _as_or(f: Formula) -> tuple[Formula, Formula] | None:
    if isinstance(f, Not) and isinstance(f.body, And):
        l, r = f.body.left, f.body.right
        if isinstance(l, Not) and isinstance(r, Not):
            return l.body, r.body
    return None


def _as_implies(f: Formula) -> tuple[Formula, Formula] | None:
    o = _as_or(f)
    if o is not None and isinstance(o[0], Not):
        return o[0].body, o[1]
    return None


def _as_iff(f: Formula) -> tuple[Formula, Formula] | None:
    if isinstance(f, And):
        l, r = _as_implies(f.left), _as_implies(f.right)
        if l is not None and r is not None and l == (r[1], r[0]):
            return l
    return None


def pretty(f: Formula, default_agent: Agent = "a") -> str:
    """Readable syntax with ``->``, ``|``, ``<->``, ``true`` and ``false`` folded back.

    ``parse_formula(pretty(f))`` gives ``f`` again, provided
    ``default_agent`` is the parser's default agent.
    """

    def go(g: Formula, need: int, operand: bool) -> str:
        text, level = node(g)
        sugared = text.startswith(("true", "false"))
        wrap = level < need or isinstance(g, Knows) or (operand and isinstance(g, Proves) and not sugared)
        return f"({text})" if wrap else text

    def node(g: Formula) -> tuple[str, int]:
        t = _as_true(g)
        if t is not None:
            return ("true" if t == default_agent else f"true@{t}"), 5
        if isinstance(g, Not) and _as_true(g.body) is not None:
            t = _as_true(g.body)
            return ("false" if t == default_agent else f"false@{t}"), 5
        pair = _as_iff(g)
        if pair:
            return f"{go(pair[0], 2, True)} <-> {go(pair[1], 2, True)}", 0
        pair = _as_implies(g)
        if pair:
            return f"{go(pair[0], 2, True)} -> {go(pair[1], 2, True)}", 1
        pair = _as_or(g)
        if pair:
            return f"{go(pair[0], 2, True)} | {go(pair[1], 3, True)}", 2
        if isinstance(g, And):
            return f"{go(g.left, 3, True)} & {go(g.right, 4, True)}", 3
        if isinstance(g, Not):
            return "~" + go(g.body, 4, True), 4
        if isinstance(g, Proves):
            return f"[{render_message(g.msg)}]{g.agent} " + go(g.body, 4, False), 5
        if isinstance(g, Knows):
            return f"{g.agent} knows {render_message(g.msg)}", 5
        if isinstance(g, Prop):
            return g.name, 5
        if isinstance(g, FVar):
            return "?" + g.name, 5
        raise TypeError(f"not a formula: {g!r}")

    return node(f)[0]


def ast_string(f: Formula) -> str:
    """Constructor-style dump used by ``ldiip parse``."""
    if isinstance(f, Prop):
        return f"Prop({f.name})"
    if isinstance(f, FVar):
        return f"FVar({f.name})"
    if isinstance(f, Knows):
        return f"Knows({f.agent}, {render_message(f.msg)})"
    if isinstance(f, Not):
        return f"Not({ast_string(f.body)})"
    if isinstance(f, And):
        return f"And({ast_string(f.left)}, {ast_string(f.right)})"
    if isinstance(f, Proves):
        return f"Proves({render_message(f.msg)}, {f.agent}, {ast_string(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Parsing


class ParseError(ValueError):
    """Syntax error or unknown agent; ``column`` is 1-based."""

    def __init__(self, message: str, column: int, text: str = ""):
        super().__init__(f"column {column}: {message}")
        self.column = column
        self.text = text
        self.reason = message


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<var>\?[A-Za-z][A-Za-z0-9_']*)
  | (?P<lower>[a-z][a-z0-9_]*)
  | (?P<upper>[A-Z][A-Za-z0-9_]*)
  | (?P<zero>0)
  | (?P<sym>[()\[\],~&|@:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1, text)
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            if kind == "sym":
                kind = tok
            elif kind == "lower" and tok in KEYWORDS:
                kind = tok
            elif kind in ("iff", "imp"):
                kind = tok
            tokens.append(Token(kind, tok, pos + 1))
        pos = m.end()
    tokens.append(Token("eof", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, agents: Sequence[str] | None, schema: bool):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.agents = None if agents is None else tuple(agents)
        if self.agents is not None and not self.agents:
            raise ValueError("agent universe must be nonempty")
        self.schema = schema
        self.sorts: dict[str, str] = {}

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        where = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{msg} at {where}", tok.column, self.text)

    def eat(self, kind: str) -> Token:
        tok = self.tok
        if tok.kind != kind:
            raise self.error(f"expected {kind!r}")
        self.i += 1
        return tok

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def metavar(self, tok: Token, sort: str):
        name = tok.text[1:]
        if not self.schema:
            raise self.error("metavariables are only allowed in schemas", tok)
        known = self.sorts.setdefault(name, sort)
        if known != sort:
            raise self.error(f"metavariable ?{name} used as {sort}, already a {known}", tok)
        return {"formula": FVar, "message": MVar, "agent": AVar}[sort](name)

    def default_agent(self) -> str:
        return min(self.agents) if self.agents else "a"

    # grammar
    def agent(self) -> Agent:
        tok = self.tok
        if tok.kind == "var":
            self.i += 1
            return self.metavar(tok, "agent")
        if tok.kind != "lower":
            raise self.error("expected agent name")
        self.i += 1
        if self.agents is not None and tok.text not in self.agents:
            raise ParseError(
                f"unknown agent {tok.text!r} (agents: {', '.join(self.agents)})",
                tok.column,
                self.text,
            )
        return tok.text

    def message(self) -> Message:
        tok = self.tok
        if tok.kind == "var":
            self.i += 1
            return self.metavar(tok, "message")
        if tok.kind == "lower":
            self.i += 1
            return Atom(tok.text)
        if tok.kind == "sig":
            self.i += 1
            self.eat("(")
            body = self.message()
            self.eat(",")
            signer = self.agent()
            self.eat(")")
            return Sig(body, signer)
        if tok.kind == "(":
            self.i += 1
            left = self.message()
            self.eat(",")
            right = self.message()
            self.eat(")")
            return Pair(left, right)
        raise self.error("expected message")

    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        left = self.imp()
        if self.accept("<->"):
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("["):
            m = self.message()
            self.eat("]")
            a = self.agent()
            return Proves(m, a, self.unary())
        return self.primary()

    def constant(self) -> Agent:
        if self.accept("@"):
            return self.agent()
        return self.default_agent()

    def primary(self) -> Formula:
        tok = self.tok
        if tok.kind == "upper":
            self.i += 1
            return Prop(tok.text)
        if tok.kind == "true":
            self.i += 1
            return true(self.constant())
        if tok.kind == "false":
            self.i += 1
            return false(self.constant())
        if tok.kind == "(":
            self.i += 1
            f = self.formula()
            self.eat(")")
            return f
        if tok.kind == "lower" or (tok.kind == "var" and self.tokens[self.i + 1].kind == "knows"):
            a = self.agent()
            self.eat("knows")
            return Knows(a, self.message())
        if tok.kind == "var":
            self.i += 1
            return self.metavar(tok, "formula")
        raise self.error("expected formula")


def parse_formula(text: str, agents: Sequence[str] | None = DEFAULT_AGENTS) -> Formula:
    """Parse surface syntax into a core formula.

    ``agents`` is the agent universe; ``None`` accepts any lowercase name
    in agent positions.  ``true``/``false`` use the lexicographically first
    agent unless written ``true@b``.
    """
    p = _Parser(text, agents, schema=False)
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error("unexpected token")
    return f


def parse_message(text: str, agents: Sequence[str] | None = None) -> Message:
    p = _Parser(text, agents, schema=False)
    m = p.message()
    if p.tok.kind != "eof":
        raise p.error("unexpected token")
    return m


def parse_schema(text: str) -> Formula:
    """Parse a schema; ``?name`` metavariables take the sort of their position."""
    p = _Parser(text, None, schema=True)
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error("unexpected token")
    return f


# ---------------------------------------------------------------------------
# Schema matching and substitution

Substitution = dict


def match_schema(schema: Formula, f: Formula) -> Substitution | None:
    """First-order match of ``schema`` against ``f``.

    Returns a mapping from metavariable names to formulas, messages or
    agent names, or ``None``.  The walk is leftmost-outermost, so the
    result is deterministic.
    """
    theta: dict = {}
    return theta if _match_f(schema, f, theta) else None


def _bind(theta: dict, name: str, value) -> bool:
    if name in theta:
        return theta[name] == value
    theta[name] = value
    return True


def _match_agent(p: Agent, a: Agent, theta: dict) -> bool:
    if isinstance(p, AVar):
        return isinstance(a, str) and _bind(theta, p.name, a)
    return p == a


def _match_m(p: Message, m: Message, theta: dict) -> bool:
    if isinstance(p, MVar):
        return _bind(theta, p.name, m)
    if isinstance(p, Atom):
        return isinstance(m, Atom) and _match_agent(p.name, m.name, theta)
    if isinstance(p, Pair):
        return isinstance(m, Pair) and _match_m(p.left, m.left, theta) and _match_m(p.right, m.right, theta)
    if isinstance(p, Sig):
        return isinstance(m, Sig) and _match_m(p.body, m.body, theta) and _match_agent(p.signer, m.signer, theta)
    return False


def _match_f(p: Formula, f: Formula, theta: dict) -> bool:
    if isinstance(p, FVar):
        return _bind(theta, p.name, f)
    if type(p) is not type(f):
        return False
    if isinstance(p, Prop):
        return p == f
    if isinstance(p, Knows):
        return _match_agent(p.agent, f.agent, theta) and _match_m(p.msg, f.msg, theta)
    if isinstance(p, Not):
        return _match_f(p.body, f.body, theta)
    if isinstance(p, And):
        return _match_f(p.left, f.left, theta) and _match_f(p.right, f.right, theta)
    if isinstance(p, Proves):
        return (
            _match_m(p.msg, f.msg, theta)
            and _match_agent(p.agent, f.agent, theta)
            and _match_f(p.body, f.body, theta)
        )
    return False


def _subst_agent(a: Agent, theta: dict) -> Agent:
    return theta[a.name] if isinstance(a, AVar) and a.name in theta else a


def _subst_m(m: Message, theta: dict) -> Message:
    if isinstance(m, MVar):
        return theta.get(m.name, m)
    if isinstance(m, Atom):
        return Atom(_subst_agent(m.name, theta))
    if isinstance(m, Pair):
        return Pair(_subst_m(m.left, theta), _subst_m(m.right, theta))
    if isinstance(m, Sig):
        return Sig(_subst_m(m.body, theta), _subst_agent(m.signer, theta))
    raise TypeError(m)


def substitute(schema: Formula, theta: dict) -> Formula:
    """Instantiate metavariables; unbound ones are left in place."""
    f = schema
    if isinstance(f, FVar):
        return theta.get(f.name, f)
    if isinstance(f, Prop):
        return f
    if isinstance(f, Knows):
        return Knows(_subst_agent(f.agent, theta), _subst_m(f.msg, theta))
    if isinstance(f, Not):
        return Not(substitute(f.body, theta))
    if isinstance(f, And):
        return And(substitute(f.left, theta), substitute(f.right, theta))
    if isinstance(f, Proves):
        return Proves(_subst_m(f.msg, theta), _subst_agent(f.agent, theta), substitute(f.body, theta))
    raise TypeError(f)


def metavariables(schema: Formula) -> dict[str, str]:
    """Map metavariable name to sort ("formula", "message" or "agent")."""
    out: dict[str, str] = {}

    def agent(a):
        if isinstance(a, AVar):
            out[a.name] = "agent"

    def msg(m):
        if isinstance(m, MVar):
            out[m.name] = "message"
        elif isinstance(m, Atom):
            agent(m.name)
        elif isinstance(m, Pair):
            msg(m.left)
            msg(m.right)
        elif isinstance(m, Sig):
            msg(m.body)
            agent(m.signer)

    for g in iter_subformulas(schema):
        if isinstance(g, FVar):
            out[g.name] = "formula"
        elif isinstance(g, Knows):
            agent(g.agent)
            msg(g.msg)
        elif isinstance(g, Proves):
            agent(g.agent)
            msg(g.msg)
    return out


def is_ground(f: Formula) -> bool:
    return not metavariables(f)


def all_messages(forms: Iterable[Formula]) -> list[Message]:
    seen: dict[Message, None] = {}
    for f in forms:
        for m in messages_of(f):
            seen.setdefault(m)
    return list(seen)
