"""``ldiip`` command line.

Exit codes: 0 success, 1 bad input (syntax, file format, usage), 2 model
violates the accessibility interface, 3 counter-model found, 4 derivation
check failed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import corpus as corpus_mod
from .concrete import ZERO, Recv, eval_concrete, knows as concrete_knows, parse_state, render_state
from .decide import BoundTooLarge, CounterModel, DEFAULT_CEILING, decide
from .knowledge import STRATEGIES, DEFAULT_CLOSURE, Closure
from .model import ModelError, ModelFormatError, eval, parse_model, render_model, validate_interface
from .proof import AxiomCatalog, DerivationFormatError, check_derivation, load_gamma1, parse_derivation
from .syntax import (
    Atom,
    Not,
    Or,
    ParseError,
    Prop,
    Proves,
    Sig,
    ast_string,
    modal_signature,
    parse_formula,
    pretty,
    props_of,
)

EXIT_OK, EXIT_INPUT, EXIT_INTERFACE, EXIT_COUNTER, EXIT_CHECK = 0, 1, 2, 3, 4


@dataclass
class Config:
    agents: tuple[str, ...] = ("a", "b")
    closure: Closure = DEFAULT_CLOSURE
    catalog: AxiomCatalog = field(default_factory=AxiomCatalog)
    ceiling: int = DEFAULT_CEILING


def load_config(path: str | None, agents_flag: str | None) -> Config:
    cfg = Config()
    if path:
        base = Path(path).parent
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = (x.strip() for x in line.partition("="))
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            if key == "agents":
                cfg.agents = _agent_list(value)
            elif key == "closure":
                if value not in STRATEGIES:
                    raise ValueError(f"{path}:{lineno}: closure must be one of {', '.join(STRATEGIES)}")
                cfg.closure = STRATEGIES[value]
            elif key == "gamma1":
                cfg.catalog = AxiomCatalog.with_gamma1(load_gamma1((base / value).read_text()))
            elif key == "ceiling":
                cfg.ceiling = int(value)
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    if agents_flag:
        cfg.agents = _agent_list(agents_flag)
    return cfg


def _agent_list(text: str) -> tuple[str, ...]:
    agents = tuple(sorted({a.strip() for a in text.split(",") if a.strip()}))
    if not agents:
        raise ValueError("the agent universe must be nonempty")
    bad = [a for a in agents if not (a[0].islower() and a.replace("_", "").isalnum())]
    if bad:
        raise ValueError(f"bad agent name(s): {', '.join(bad)}")
    return agents


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors share the bad-input exit code
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _parse_error(text: str, e: ParseError) -> int:
    print(f"error: {e}", file=sys.stderr)
    print(f"  {text}", file=sys.stderr)
    print("  " + " " * (e.column - 1) + "^", file=sys.stderr)
    return EXIT_INPUT


def cmd_parse(args, cfg: Config) -> int:
    try:
        f = parse_formula(args.formula, cfg.agents)
    except ParseError as e:
        return _parse_error(args.formula, e)
    print(ast_string(f))
    return EXIT_OK


def cmd_eval(args, cfg: Config) -> int:
    try:
        f = parse_formula(args.formula, cfg.agents)
    except ParseError as e:
        return _parse_error(args.formula, e)
    if args.concrete is not None:
        try:
            s = parse_state(args.concrete, cfg.agents)
        except ParseError as e:
            return _parse_error(args.concrete, e)
        val = {p: (lambda _s: True) for p in args.true}
        print(str(eval_concrete(f, s, val, cfg.closure)).lower())
        return EXIT_OK
    try:
        model = parse_model(Path(args.model).read_text(), cfg.closure, cfg.agents)
    except (OSError, ModelFormatError) as e:
        print(f"error: invalid model file: {e}", file=sys.stderr)
        return EXIT_INPUT
    if args.state not in model.states:
        print(f"error: no state {args.state!r} in the model", file=sys.stderr)
        return EXIT_INPUT
    missing = {p: () for p in props_of(f) if p not in model.prop_val}
    if missing:  # propositions the file does not mention are false everywhere
        model = model.with_valuation({**model.prop_val, **missing})
    sig = list(dict.fromkeys(list(model.trans) + modal_signature(f)))
    report = validate_interface(model, sig)
    if not report.ok:
        print("model violates the accessibility interface:")
        print(report.summary())
        return EXIT_INTERFACE
    try:
        print(str(eval(model, args.state, f)).lower())
    except ModelError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_decide(args, cfg: Config) -> int:
    try:
        f = parse_formula(args.formula, cfg.agents)
    except ParseError as e:
        return _parse_error(args.formula, e)
    try:
        verdict = decide(f, args.max_states, cfg.closure, cfg.ceiling)
    except BoundTooLarge as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(verdict)
    if isinstance(verdict, CounterModel):
        print(render_model(verdict.model), end="")
        return EXIT_COUNTER
    return EXIT_OK


def cmd_check(args, cfg: Config) -> int:
    if args.list_corpus:
        for name in corpus_mod.names():
            print(name)
        return EXIT_OK
    if args.file is None:
        print("error: give a derivation file or --list-corpus", file=sys.stderr)
        return EXIT_INPUT
    path = Path(args.file)
    try:
        if path.exists():
            d = parse_derivation(path.read_text(), cfg.agents, name=path.stem)
        elif args.file in corpus_mod.BUILDERS:
            d = corpus_mod.load(args.file)
        else:
            print(f"error: no such file or corpus entry: {args.file}", file=sys.stderr)
            return EXIT_INPUT
    except (DerivationFormatError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    verdict = check_derivation(d, cfg.catalog)
    if verdict.ok:
        print(f"OK ({len(d)} lines): {pretty(d.conclusion)}")
        return EXIT_OK
    print(verdict)
    return EXIT_CHECK


def cmd_demo_accountability(args, cfg: Config) -> int:
    agents = tuple(sorted(set(cfg.agents) | {"a", "b", "c"}))
    if args.agent not in agents:
        print(f"error: unknown agent {args.agent!r}", file=sys.stderr)
        return EXIT_INPUT
    x = args.agent
    correct = Prop("Correct_b")
    log = Sig(Atom("log"), "b")
    positive = Proves(log, x, correct)
    negative = Proves(log, x, Not(correct))
    decider = Or(positive, negative)
    holds = args.correct == "true"
    val = {"Correct_b": lambda _s: holds}

    print(f"agents: {', '.join(agents)}")
    print("statement: Correct_b (agent b behaved correctly)")
    print(f"evidence: M = {'sig(log, b)'} (b's signed log)")
    print(f"decider formula: {pretty(decider)}")
    name = cfg.catalog.is_axiom(decider)
    print(f"axiom instance: {name}")
    if name == "NegationCompleteness":
        print("M is an epistemic decider for Correct_b")
    before, after = ZERO, Recv(x, log, ZERO)
    for s in (before, after):
        print(f"state {render_state(s)}:")
        print(f"  {x} knows M: {str(concrete_knows(x, log, s, cfg.closure)).lower()}")
        print(f"  decider holds: {str(eval_concrete(decider, s, val, cfg.closure)).lower()}")
    role = "auditor" if x != "a" else "verifier"
    if eval_concrete(positive, after, val, cfg.closure):
        print(f"verdict: M proves Correct_b to {x} ({role})")
    else:
        print(f"verdict: M proves ~Correct_b to {x} ({role})")
    print(f"{x} holds M, so the proven side is true: decisive evidence")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ldiip", description="Logic of disjunctive interactive proofs: parse, evaluate, decide, check.")
    p.add_argument("--agents", help="comma-separated agent universe (default a,b)")
    p.add_argument("--config", help="key=value file: agents, gamma1, closure, ceiling")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("parse", help="print the core syntax tree of a formula")
    sp.add_argument("formula")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("eval", help="evaluate a formula at a state")
    sp.add_argument("formula")
    where = sp.add_mutually_exclusive_group(required=True)
    where.add_argument("--model", help="model file (propositions it does not list are false everywhere)")
    where.add_argument("--concrete", metavar="STATE", help='concrete history such as "recv(a, m, 0)"')
    sp.add_argument("--state", default="s0", help="state of the model file (default s0)")
    sp.add_argument("--true", action="append", default=[], metavar="PROP",
                    help="proposition true everywhere in the concrete semantics (repeatable)")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("decide", help="decide validity, printing a counter-model if there is one")
    sp.add_argument("formula")
    sp.add_argument("--max-states", type=int, help="bounded search (verdict ValidUpTo when nothing is found)")
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("check", help="check a derivation file or corpus entry")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--list-corpus", action="store_true", help="list the built-in derivations")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("demo-accountability", help="signed-log accountability walkthrough")
    sp.add_argument("--correct", choices=("true", "false"), default="true")
    sp.add_argument("--agent", default="a", help="who receives the log (use c for a third-party auditor)")
    sp.set_defaults(func=cmd_demo_accountability)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args.agents)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return args.func(args, cfg)


if __name__ == "__main__":
    sys.exit(main())
