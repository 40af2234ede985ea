import pytest
from hypothesis import given

from ldiip.syntax import (
    AVar,
    And,
    Atom,
    FVar,
    Knows,
    MVar,
    Not,
    Pair,
    ParseError,
    Prop,
    Proves,
    Sig,
    ast_string,
    formula_size,
    knowledge_atoms,
    match_schema,
    message_size,
    metavariables,
    modal_depth,
    modal_signature,
    parse_formula,
    parse_message,
    parse_schema,
    pretty,
    render,
    render_message,
    subformula_closure,
    substitute,
    subterms,
    true,
)

from .strategies import formulas, messages

m, n = Atom("m"), Atom("n")
P, Q = Prop("P"), Prop("Q")


def test_box_knows():
    assert parse_formula("[m]a (a knows m)") == Proves(m, "a", Knows("a", m))


def test_true_expands_to_self_knowledge_of_first_agent():
    assert parse_formula("true") == Proves(Atom("a"), "a", Knows("a", Atom("a")))
    assert parse_formula("true", agents=("c", "b")) == true("b")
    assert parse_formula("false@b") == Not(true("b"))


def test_derived_connectives_are_expanded():
    assert parse_formula("P | Q") == Not(And(Not(P), Not(Q)))
    assert parse_formula("P -> Q") == Not(And(Not(Not(P)), Not(Q)))
    assert parse_formula("P <-> Q") == And(parse_formula("P -> Q"), parse_formula("Q -> P"))


def test_precedence():
    # modal prefix binds tighter than &, & tighter than |, | tighter than ->
    assert parse_formula("[m]a P & Q") == And(Proves(m, "a", P), Q)
    assert parse_formula("P & Q | P") == parse_formula("(P & Q) | P")
    assert parse_formula("P -> Q -> P") == parse_formula("P -> (Q -> P)")
    assert parse_formula("~[m]a P") == Not(Proves(m, "a", P))


def test_messages():
    assert parse_message("(m, sig(n, b))") == Pair(m, Sig(n, "b"))
    assert render_message(Pair(m, Sig(n, "b"))) == "(m, sig(n, b))"
    assert message_size(Pair(m, Sig(n, "b"))) == 5
    assert subterms(Sig(n, "b")) == {Sig(n, "b"), n, Atom("b")}


def test_column_of_errors():
    with pytest.raises(ParseError) as e:
        parse_formula("[m]a")
    assert e.value.column == 5
    with pytest.raises(ParseError) as e:
        parse_formula("P & $")
    assert e.value.column == 5


def test_unknown_agent_rejected_in_agent_positions_only():
    with pytest.raises(ParseError, match="unknown agent"):
        parse_formula("[m]z P")
    with pytest.raises(ParseError) as e:
        parse_formula("c knows m")
    assert e.value.column == 1
    # message atoms are free-form names
    assert parse_formula("a knows zz") == Knows("a", Atom("zz"))
    assert parse_formula("[m]c P", agents=("a", "b", "c")) == Proves(m, "c", P)


def test_ast_string():
    assert ast_string(parse_formula("[m]a (a knows m)")) == "Proves(m, a, Knows(a, m))"
    assert ast_string(parse_formula("~P & Q")) == "And(Not(Prop(P)), Prop(Q))"


@given(formulas)
def test_render_round_trip(f):
    assert parse_formula(render(f)) == f


@given(formulas)
def test_pretty_round_trip(f):
    assert parse_formula(pretty(f)) == f


@given(messages)
def test_message_round_trip(msg):
    assert parse_message(render_message(msg)) == msg


@given(formulas)
def test_closure_contains_self_and_is_bounded(f):
    cl = subformula_closure(f)
    assert f in cl
    assert len(cl) <= formula_size(f)


def test_signature_and_depth():
    f = parse_formula("[m]a ([n]b P & a knows m) -> [m]a Q")
    assert modal_signature(f) == [(m, "a"), (n, "b")]
    assert knowledge_atoms(f) == [("a", m)]
    assert modal_depth(f) == 2


def test_pretty_folds_macros():
    assert pretty(parse_formula("([m]a P) | [m]a ~P")) == "([m]a P) | ([m]a ~P)"
    assert pretty(parse_formula("~([m]a false)")) == "~([m]a false)"
    assert pretty(parse_formula("a knows m -> ([m]a P -> P)")) == "(a knows m) -> (([m]a P) -> P)"


class TestSchemas:
    def test_sorts(self):
        s = parse_schema("[?M]?a (?a knows ?M) & ?phi")
        assert metavariables(s) == {"M": "message", "a": "agent", "phi": "formula"}

    def test_sort_clash(self):
        with pytest.raises(ParseError, match="already"):
            parse_schema("?x & ?y knows ?x")

    def test_match_and_substitute(self):
        s = parse_schema("[?M]?a ?phi -> (?a knows ?M -> ?phi)")
        f = parse_formula("[(m, n)]b P -> (b knows (m, n) -> P)")
        theta = match_schema(s, f)
        assert theta == {"M": Pair(m, n), "a": "b", "phi": P}
        assert substitute(s, theta) == f

    def test_nonlinear_pattern_needs_equal_parts(self):
        s = parse_schema("[?M]?a (?a knows ?M)")
        assert match_schema(s, parse_formula("[m]a (b knows m)")) is None
        assert match_schema(s, parse_formula("[m]a (a knows n)")) is None

    def test_agent_metavariable_inside_message(self):
        s = parse_schema("~([?M]?a false@?c)")
        assert match_schema(s, parse_formula("~([m]b false@b)"))["c"] == "b"

    def test_metavariables_rejected_in_formulas(self):
        with pytest.raises(ParseError):
            parse_formula("?phi")

    def test_constructors(self):
        assert parse_schema("?x") == FVar("x")
        assert parse_schema("?a knows ?M") == Knows(AVar("a"), MVar("M"))
