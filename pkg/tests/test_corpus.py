from importlib import resources

import pytest

from ldiip import corpus
from ldiip.decide import CounterModel, decide
from ldiip.model import eval, small_countermodel
from ldiip.proof import check_derivation, is_axiom
from ldiip.syntax import parse_formula

NAMES = corpus.names()


def test_names():
    assert len(NAMES) == 15
    assert {"Thm2.1-maximal-consistency", "Cor1-five-law", "S1.1.1-NC-from-IDP", "Fact2.1-regularity"} <= set(NAMES)


@pytest.mark.parametrize("name", NAMES)
def test_entry_checks(name):
    d = corpus.load(name)
    assert check_derivation(d).ok
    assert d == corpus.build(name)


@pytest.mark.parametrize("name", NAMES)
def test_shipped_files_are_current(name):
    shipped = resources.files("ldiip").joinpath("corpus", f"{name}.drv").read_text()
    assert shipped == corpus.render_entry(name)


@pytest.mark.parametrize("name", NAMES)
def test_conclusion_holds_on_small_models(name):
    d = corpus.load(name)
    assert small_countermodel(d.conclusion, 3, d.premises) is None


@pytest.mark.parametrize(
    "name, conclusion",
    [
        ("Thm2.1-maximal-consistency", "([m]a ~P) <-> ~([m]a P)"),
        ("Cor1-five-law", "~([m]a P) -> [m]a ~([m]a P)"),
        ("S1.1.1-NC-from-IDP", "([m]a P) | [m]a ~P"),
        ("Fact2.1-regularity", "([m]a P) -> [m]a Q"),
        ("Cor1-T-law", "a knows m -> (([m]a P) -> P)"),
    ],
)
def test_conclusions(name, conclusion):
    assert corpus.load(name).conclusion == parse_formula(conclusion)


def test_premise_entries():
    assert corpus.load("Fact2.1-regularity").premises == (parse_formula("P -> Q"),)
    assert len(corpus.load("S1.1.1-NC-from-IDP").premises) == 1
    assert all(not corpus.load(n).premises for n in NAMES if n not in ("Fact2.1-regularity", "S1.1.1-NC-from-IDP"))


def test_monotonicity_is_not_derivable():
    f = parse_formula("([m]a P) -> [(m, n)]a P")
    assert is_axiom(f) is None
    assert all(corpus.load(n).conclusion != f for n in NAMES)
    verdict = decide(f, max_states=3)
    assert isinstance(verdict, CounterModel)
    assert not eval(verdict.model, verdict.state, f)


def test_unknown_entry():
    with pytest.raises(KeyError):
        corpus.load("Thm9.9-nothing")
