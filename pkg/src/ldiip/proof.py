"""Hilbert-style derivations: axiom recognition and line-by-line checking.

Propositional reasoning is handled wholesale: any formula whose
propositional skeleton is a truth-table tautology counts as an axiom
(``taut``).  On top of that come the five modal schemas, an optional list
of user-supplied schemas for knowledge atoms, and the two rules modus
ponens and necessitation.

Line numbers and premise numbers are 1-based throughout, both in the API
and in ``.drv`` files.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .model import _bit_mask
from .syntax import (
    And,
    Formula,
    Implies,
    Message,
    Not,
    ParseError,
    Proves,
    _Parser,
    match_schema,
    parse_formula,
    parse_schema,
    pretty,
    render,
    render_message,
)

# ---------------------------------------------------------------------------
# Tautologies

MAX_SKELETON_ATOMS = 24


def skeleton_atoms(f: Formula) -> list[Formula]:
    """Maximal non-Boolean subformulas, in first-occurrence order."""
    seen: dict[Formula, None] = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, And):
            stack += [g.right, g.left]
        else:
            seen.setdefault(g)
    return list(seen)


def is_tautology_instance(f: Formula) -> bool:
    """Is the propositional skeleton of ``f`` true under every assignment?"""
    atoms = skeleton_atoms(f)
    n = len(atoms)
    if n > MAX_SKELETON_ATOMS:
        raise ValueError(f"skeleton has {n} atoms; the truth table limit is {MAX_SKELETON_ATOMS}")
    full = (1 << (1 << n)) - 1
    masks = {g: _bit_mask(i, n) for i, g in enumerate(atoms)}
    memo: dict[Formula, int] = {}

    def go(g: Formula) -> int:
        if g in masks:
            return masks[g]
        hit = memo.get(g)
        if hit is None:
            if isinstance(g, Not):
                hit = full ^ go(g.body)
            else:
                hit = go(g.left) & go(g.right)
            memo[g] = hit
        return hit

    return go(f) == full


# ---------------------------------------------------------------------------
# Axiom catalog

MODAL_AXIOMS: tuple[tuple[str, str], ...] = (
    ("SelfKnowledge", "[?M]?a (?a knows ?M)"),
    ("K", "[?M]?a (?phi -> ?psi) -> ([?M]?a ?phi -> [?M]?a ?psi)"),
    ("EpistemicTruthfulness", "[?M]?a ?phi -> (?a knows ?M -> ?phi)"),
    ("ProofConsistency", "~([?M]?a false@?c)"),
    ("NegationCompleteness", "([?M]?a ?phi) | [?M]?a ~?phi"),
)

TAUT = "Taut"


@dataclass(frozen=True)
class AxiomCatalog:
    """The modal schemas plus extra schemas for knowledge atoms."""

    modal: tuple[tuple[str, Formula], ...] = field(
        default_factory=lambda: tuple((n, parse_schema(s)) for n, s in MODAL_AXIOMS)
    )
    gamma1: tuple[tuple[str, Formula], ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.modal] + [n for n, _ in self.gamma1] + [TAUT]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise ValueError(f"duplicate axiom name(s): {', '.join(sorted(dupes))}")

    @classmethod
    def with_gamma1(cls, schemas: Iterable[tuple[str, str | Formula]]) -> "AxiomCatalog":
        g1 = tuple((n, parse_schema(s) if isinstance(s, str) else s) for n, s in schemas)
        return cls(gamma1=g1)

    def schema(self, name: str) -> Formula | None:
        for n, s in self.modal + self.gamma1:
            if n == name:
                return s
        return None

    def is_modal_axiom(self, f: Formula) -> str | None:
        for name, schema in self.modal:
            if match_schema(schema, f) is not None:
                return name
        return None

    def is_gamma1(self, f: Formula) -> str | None:
        for name, schema in self.gamma1:
            if match_schema(schema, f) is not None:
                return name
        return None

    def is_axiom(self, f: Formula) -> str | None:
        """Name of the first schema ``f`` instantiates, ``"Taut"``, or ``None``."""
        return self.is_modal_axiom(f) or self.is_gamma1(f) or (TAUT if is_tautology_instance(f) else None)


DEFAULT_CATALOG = AxiomCatalog()


def is_axiom(f: Formula, catalog: AxiomCatalog = DEFAULT_CATALOG) -> str | None:
    return catalog.is_axiom(f)


def load_gamma1(text: str) -> list[tuple[str, Formula]]:
    """Parse ``NAME: schema`` lines (``#`` comments allowed)."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, body = line.partition(":")
        name = name.strip()
        if not sep or not re.fullmatch(r"[A-Za-z][A-Za-z0-9_-]*", name):
            raise ValueError(f"line {lineno}: expected 'NAME: schema'")
        try:
            out.append((name, parse_schema(body.strip())))
        except ParseError as e:
            raise ValueError(f"line {lineno}: {e}") from None
    return out


# ---------------------------------------------------------------------------
# Derivations


@dataclass(frozen=True)
class Taut:
    def __str__(self) -> str:
        return "taut"


@dataclass(frozen=True)
class Axiom:
    name: str

    def __str__(self) -> str:
        return f"ax:{self.name}"


@dataclass(frozen=True)
class Gamma1:
    name: str

    def __str__(self) -> str:
        return f"g1:{self.name}"


@dataclass(frozen=True)
class Premise:
    index: int

    def __str__(self) -> str:
        return f"prem:{self.index}"


@dataclass(frozen=True)
class MP:
    """Modus ponens: line ``minor`` is φ, line ``major`` is φ → (this line)."""

    minor: int
    major: int

    def __str__(self) -> str:
        return f"mp:{self.minor},{self.major}"


@dataclass(frozen=True)
class Nec:
    line: int
    msg: Message
    agent: str

    def __str__(self) -> str:
        return f"nec:{self.line},[{render_message(self.msg)}]{self.agent}"


Justification = Union[Taut, Axiom, Gamma1, Premise, MP, Nec]


@dataclass(frozen=True)
class Line:
    formula: Formula
    just: Justification


@dataclass(frozen=True)
class Derivation:
    premises: tuple[Formula, ...]
    lines: tuple[Line, ...]
    name: str = ""

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula

    def __len__(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    line: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "OK" if self.ok else f"FAIL at line {self.line}: {self.reason}"


def _check_line(d: Derivation, n: int, catalog: AxiomCatalog) -> str | None:
    """Reason line ``n`` (1-based) is unjustified, or ``None``."""
    line = d.lines[n - 1]
    f, j = line.formula, line.just

    def earlier(k: int, role: str) -> Formula:
        if not 1 <= k < n:
            raise IndexError(f"{role} cites line {k}, which is not an earlier line")
        return d.lines[k - 1].formula

    try:
        if isinstance(j, Taut):
            return None if is_tautology_instance(f) else "not a propositional tautology instance"
        if isinstance(j, Axiom):
            schema = dict(catalog.modal).get(j.name)
            if schema is None:
                return f"unknown axiom {j.name!r}"
            return None if match_schema(schema, f) is not None else f"not an instance of {j.name}"
        if isinstance(j, Gamma1):
            schema = dict(catalog.gamma1).get(j.name)
            if schema is None:
                return f"no knowledge axiom named {j.name!r} is configured"
            return None if match_schema(schema, f) is not None else f"not an instance of {j.name}"
        if isinstance(j, Premise):
            if not 1 <= j.index <= len(d.premises):
                raise IndexError(f"premise {j.index} does not exist ({len(d.premises)} premise(s))")
            return None if d.premises[j.index - 1] == f else f"differs from premise {j.index}"
        if isinstance(j, MP):
            minor = earlier(j.minor, "mp")
            major = earlier(j.major, "mp")
            if major != Implies(minor, f):
                return f"line {j.major} is not 'line {j.minor} -> this line'"
            return None
        if isinstance(j, Nec):
            body = earlier(j.line, "nec")
            if f != Proves(j.msg, j.agent, body):
                return f"not [{render_message(j.msg)}]{j.agent} applied to line {j.line}"
            return None
    except IndexError as e:
        return str(e)
    return f"unknown justification {j!r}"


def check_derivation(d: Derivation, catalog: AxiomCatalog = DEFAULT_CATALOG) -> Verdict:
    """Check every line; report the first unjustified one."""
    if not d.lines:
        return Verdict(False, None, "empty derivation")
    for n in range(1, len(d.lines) + 1):
        reason = _check_line(d, n, catalog)
        if reason is not None:
            return Verdict(False, n, reason)
    return Verdict(True)


# ---------------------------------------------------------------------------
# Building derivations


class DerivationBuilder:
    """Accumulates lines; each method returns the 1-based number of its line.

    ``pl`` closes a propositional step: it adds the tautology
    ``r1 -> (r2 -> ... -> goal)`` and discharges it by modus ponens.
    """

    def __init__(self, premises: Sequence[Formula] = ()):
        self.premises = tuple(premises)
        self.lines: list[Line] = []

    def _add(self, f: Formula, j: Justification) -> int:
        self.lines.append(Line(f, j))
        return len(self.lines)

    def formula(self, n: int) -> Formula:
        return self.lines[n - 1].formula

    def taut(self, f: Formula) -> int:
        if not is_tautology_instance(f):
            raise ValueError(f"not a tautology: {render(f)}")
        return self._add(f, Taut())

    def ax(self, name: str, f: Formula) -> int:
        if match_schema(DEFAULT_CATALOG.schema(name), f) is None:
            raise ValueError(f"not an instance of {name}: {render(f)}")
        return self._add(f, Axiom(name))

    def prem(self, k: int) -> int:
        return self._add(self.premises[k - 1], Premise(k))

    def mp(self, minor: int, major: int) -> int:
        major_f = self.formula(major)
        if not (isinstance(major_f, Not) and isinstance(major_f.body, And)):
            raise ValueError("major premise is not an implication")
        inner = major_f.body
        if inner.left != Not(Not(self.formula(minor))) or not isinstance(inner.right, Not):
            raise ValueError("major premise does not start with the minor premise")
        return self._add(inner.right.body, MP(minor, major))

    def nec(self, n: int, m: Message, agent: str) -> int:
        return self._add(Proves(m, agent, self.formula(n)), Nec(n, m, agent))

    def pl(self, goal: Formula, *refs: int) -> int:
        chain = goal
        for r in reversed(refs):
            chain = Implies(self.formula(r), chain)
        n = self.taut(chain)
        for r in refs:
            n = self.mp(r, n)
        return n

    def regularity(self, n: int, m: Message, agent: str) -> int:
        """From line ``n`` = φ → ψ derive ``([m]a φ) -> [m]a ψ``."""
        f = self.formula(n)
        phi, psi = f.body.left.body.body, f.body.right.body
        k = self.nec(n, m, agent)
        ax = self.ax("K", Implies(Proves(m, agent, f), Implies(Proves(m, agent, phi), Proves(m, agent, psi))))
        return self.mp(k, ax)

    def regularity_iff(self, n: int, m: Message, agent: str) -> int:
        """From line ``n`` = φ ↔ ψ derive ``([m]a φ) <-> [m]a ψ``."""
        f = self.formula(n)
        fwd, bwd = f.left, f.right
        i = self.pl(fwd, n)
        j = self.pl(bwd, n)
        ri = self.regularity(i, m, agent)
        rj = self.regularity(j, m, agent)
        return self.pl(And(self.formula(ri), self.formula(rj)), ri, rj)

    def build(self, name: str = "") -> Derivation:
        return Derivation(self.premises, tuple(self.lines), name)


# ---------------------------------------------------------------------------
# Text format

_LINE_RE = re.compile(r"^(\d+)\.\s+(.*?)\s*;\s*(\S.*?)\s*$")


def render_derivation(d: Derivation, agents: Sequence[str] | None = None) -> str:
    out = []
    if d.name:
        out.append(f"# {d.name}")
    if agents:
        out.append("agents: " + ", ".join(agents))
    default = min(agents) if agents else "a"
    out.append("premises:")
    out += [pretty(p, default) for p in d.premises]
    width = len(str(len(d.lines)))
    for n, line in enumerate(d.lines, 1):
        out.append(f"{str(n).rjust(width)}. {pretty(line.formula, default)} ; {line.just}")
    return "\n".join(out) + "\n"


class DerivationFormatError(ValueError):
    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _parse_just(text: str, agents: Sequence[str] | None) -> Justification:
    kind, _, arg = text.partition(":")
    kind = kind.strip()
    arg = arg.strip()
    if kind == "taut" and not arg:
        return Taut()
    if kind == "ax" and arg:
        return Axiom(arg)
    if kind == "g1" and arg:
        return Gamma1(arg)
    if kind == "prem" and arg.isdigit():
        return Premise(int(arg))
    if kind == "mp":
        i, _, j = arg.partition(",")
        if i.strip().isdigit() and j.strip().isdigit():
            return MP(int(i), int(j))
    if kind == "nec":
        i, _, modality = arg.partition(",")
        if i.strip().isdigit():
            p = _Parser(modality.strip(), agents, schema=False)
            p.eat("[")
            m = p.message()
            p.eat("]")
            a = p.agent()
            if p.tok.kind != "eof":
                raise p.error("unexpected token")
            return Nec(int(i), m, a)
    raise ValueError(f"bad justification {text!r}")


def parse_derivation(text: str, agents: Sequence[str] | None = None, name: str = "") -> Derivation:
    """Parse a ``.drv`` file.  An ``agents:`` line overrides ``agents``."""
    premises: list[Formula] = []
    lines: list[Line] = []
    state = "start"
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        try:
            if state == "start" and s.startswith("agents:"):
                agents = [x.strip() for x in s[len("agents:"):].split(",") if x.strip()]
                continue
            if state == "start" and s == "premises:":
                state = "premises"
                continue
            m = _LINE_RE.match(s)
            if m:
                state = "lines"
                num = int(m.group(1))
                if num != len(lines) + 1:
                    raise ValueError(f"expected line number {len(lines) + 1}, got {num}")
                lines.append(Line(parse_formula(m.group(2), agents), _parse_just(m.group(3), agents)))
            elif state == "premises":
                premises.append(parse_formula(s, agents))
            else:
                raise ValueError("expected 'premises:' or a numbered line")
        except ValueError as e:
            raise DerivationFormatError(str(e), lineno) from None
    if not lines:
        raise DerivationFormatError("no derivation lines", len(text.splitlines()))
    return Derivation(tuple(premises), tuple(lines), name)


__all__ = [
    "AxiomCatalog",
    "Axiom",
    "DEFAULT_CATALOG",
    "Derivation",
    "DerivationBuilder",
    "DerivationFormatError",
    "Gamma1",
    "Line",
    "MODAL_AXIOMS",
    "MP",
    "Nec",
    "Premise",
    "Taut",
    "Verdict",
    "check_derivation",
    "is_axiom",
    "is_tautology_instance",
    "load_gamma1",
    "parse_derivation",
    "render_derivation",
    "skeleton_atoms",
]
