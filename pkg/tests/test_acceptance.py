"""Acceptance criteria, one test each, with their time limits.

A one-line PASS/FAIL summary per criterion is printed at the end of the
pytest run (see conftest.py).
"""

import itertools
import random
import time

from ldiip import corpus
from ldiip.concrete import check_concrete_interface
from ldiip.decide import (
    CounterModel,
    CounterWitness,
    Valid,
    ValidUpTo,
    agrees,
    compile_singleton,
    decide,
    decide_via_compilation,
    exhaustive_bound,
)
from ldiip.knowledge import all_terms, closure_members, derivable
from ldiip.model import (
    eval,
    filtrate,
    formula_frames,
    global_truth,
    small_countermodel,
    truth_masks,
    validate_interface,
)
from ldiip.proof import AxiomCatalog, check_derivation, is_axiom
from ldiip.sampling import random_formula, random_model
from ldiip.syntax import (
    And,
    Atom,
    Knows,
    Not,
    Pair,
    Prop,
    Proves,
    Sig,
    modal_signature,
    parse_formula,
    props_of,
    substitute,
    subformula_closure,
    subterms,
)

m, n = Atom("m"), Atom("n")
AGENTS = ("a", "b")


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f}s, limit {self.limit}s"


def test_criterion_1_axiom_soundness():
    rng = random.Random(1)
    pool = [m, Pair(m, n), Sig(m, "b")]
    schemas = AxiomCatalog().modal
    checked_models = 0
    with Timer(60):
        for _ in range(1000):
            c = rng.choice(AGENTS)
            messages = rng.sample(pool, rng.randint(1, 2)) + [Atom(c)]
            modalities = [(x, a) for x in messages for a in AGENTS]
            knowledge = [(a, x) for x in messages for a in AGENTS]
            model = random_model(rng, 4, modalities, knowledge=knowledge)
            assert validate_interface(model).ok
            bodies = [random_formula(rng, ["P", "Q"], modalities, knowledge, depth=1, size=3) for _ in range(3)]
            for name, schema in schemas:
                for (msg, a), phi, psi in itertools.product(modalities, bodies, bodies[:2]):
                    inst = substitute(schema, {"M": msg, "a": a, "c": c, "phi": phi, "psi": psi})
                    assert is_axiom(inst) is not None
                    assert global_truth(model, inst), (name, inst)
            # necessitation keeps global truth
            for phi in bodies + [Knows(c, Atom(c))]:
                if global_truth(model, phi):
                    for msg, a in modalities:
                        assert global_truth(model, Proves(msg, a, phi))
            checked_models += 1
    assert checked_models >= 1000


def test_criterion_2_concrete_interface():
    alphabet = [Atom("a"), m, Pair(Atom("a"), m), Sig(m, "b")]
    with Timer(30):
        report = check_concrete_interface(3, AGENTS, alphabet)
    assert report.checked > 0
    assert report.ok, report.summary()


def test_criterion_3_derivation_corpus():
    with Timer(60):
        for name in corpus.names():
            d = corpus.load(name)
            verdict = check_derivation(d)
            assert verdict.ok, f"{name}: {verdict}"
            if d.premises:
                # a rule rather than a theorem: premises globally true force the conclusion
                assert small_countermodel(d.conclusion, 4, d.premises) is None, name
            else:
                assert isinstance(decide(d.conclusion, max_states=4), (Valid, ValidUpTo)), name


def test_criterion_4_non_theorems():
    for text in ["a knows m", "([m]a P) -> P", "([m]a P) -> [(m, m2)]a P"]:
        f = parse_formula(text)
        with Timer(10):
            verdict = decide(f, max_states=4)
        assert isinstance(verdict, CounterModel), text
        assert len(verdict.model.states) <= 4
        assert validate_interface(verdict.model, modal_signature(f)).ok
        assert not eval(verdict.model, verdict.state, f)


def test_criterion_5_filtration():
    rng = random.Random(5)
    sig = [(m, "a"), (Pair(m, n), "a"), (Sig(n, "b"), "b"), (m, "b")]
    knowledge = [("a", n), ("b", m)]
    with Timer(60):
        for _ in range(200):
            model = random_model(rng, 4, sig, knowledge=knowledge)
            f = random_formula(rng, ["P", "Q"], sig, knowledge, depth=3, size=8)
            filt = filtrate(model, f)
            gamma = subformula_closure(f)
            assert validate_interface(filt.model).ok
            assert len(filt.model.states) <= 2 ** len(gamma)
            for s in model.states:
                for g in gamma:
                    assert eval(filt.model, filt.state_map[s], g) == eval(model, s, g)


def test_criterion_6_compilation_oracle():
    rng = random.Random(6)
    sig = [(m, "a"), (n, "a"), (Pair(m, n), "a")]
    knowledge = [("a", m), ("a", n)]
    with Timer(120):
        for _ in range(200):
            f = random_formula(rng, ["P", "Q"], sig, knowledge, depth=3, size=8)
            c = compile_singleton(f)
            atoms = props_of(f)
            for frame in formula_frames(f, 3):
                assert truth_masks(frame, f, atoms) == truth_masks(frame, c, atoms)
            # definitive verdict: the ceiling admits the 2^n bound
            v1 = decide(f, ceiling=exhaustive_bound(f))
            v2 = decide_via_compilation(f)
            assert isinstance(v1, (Valid, CounterModel))
            assert isinstance(v2, (Valid, CounterWitness))
            assert agrees(v1, v2), f


def _random_term(rng, names, size):
    if size <= 2 or rng.random() < 0.3:
        return Atom(rng.choice(names))
    if rng.random() < 0.5:
        return Sig(_random_term(rng, names, size - 2), rng.choice(AGENTS))
    return Pair(_random_term(rng, names, size // 2), _random_term(rng, names, size // 2))


def test_criterion_7_closure_oracle():
    rng = random.Random(7)
    with Timer(30):
        for _ in range(100):
            names = rng.sample(["m", "n", "k", "b"], rng.randint(1, 4))
            base = {_random_term(rng, names, 5) for _ in range(rng.randint(0, 3))}
            agent = rng.choice(AGENTS)
            atoms = {t.name for x in base for t in subterms(x) if isinstance(t, Atom)} | {agent}
            signers = set(AGENTS) | {t.signer for x in base for t in subterms(x) if isinstance(t, Sig)}
            universe = all_terms(atoms, signers, 5)
            oracle = closure_members(agent, base, 5)
            assert oracle == {t for t in universe if derivable(agent, base, t)}
            # no forgery: nobody signs for someone else
            for other in AGENTS:
                if other == agent:
                    continue
                if any(isinstance(t, Sig) and t.signer == other for x in base for t in subterms(x)):
                    continue
                assert not any(isinstance(t, Sig) and t.signer == other for t in oracle)
                assert not any(derivable(agent, base, Sig(t, other)) for t in universe)


def _small_formulas():
    leaves = [Prop("P"), Knows("a", m), Knows("b", Pair(m, n))]
    layer = list(leaves)
    seen = set(layer)
    for _ in range(3):
        nxt = []
        for f in layer:
            nxt += [Not(f), Proves(m, "a", f), Proves(Pair(m, n), "b", f)]
            nxt += [And(f, g) for g in leaves]
        layer = [f for f in nxt if f not in seen and len(subformula_closure(f)) <= 3]
        seen.update(layer)
    return sorted(seen, key=str)


def test_criterion_8_exhaustive_decisions():
    formulas = _small_formulas()
    assert len(formulas) > 30
    valid = 0
    for f in formulas:
        assert len(subformula_closure(f)) <= 3
        with Timer(60):
            verdict = decide(f)
        assert isinstance(verdict, (Valid, CounterModel)), f
        if isinstance(verdict, CounterModel):
            assert not eval(verdict.model, verdict.state, f)
        else:
            valid += 1
            assert small_countermodel(f, 3) is None, f
    assert valid > 0
