"""Built-in derivations of the standard LDiiP theorems.

Each ``_name(b, ...)`` helper appends a derivation of one law to a
:class:`DerivationBuilder` for arbitrary formulas and returns the number
of its concluding line, so later laws can inline earlier ones at any
instance they need.  The shipped ``corpus/*.drv`` files are exactly
:func:`render_derivation` of these builders.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .proof import Derivation, DerivationBuilder, parse_derivation, render_derivation
from .syntax import (
    And,
    Atom,
    Formula,
    Iff,
    Implies,
    Knows,
    Message,
    Not,
    Or,
    Prop,
    Proves,
    false,
    true,
)

P, Q = Prop("P"), Prop("Q")
M = Atom("m")
AGENTS = ("a", "b")


def _regularity(b: DerivationBuilder, n: int, m: Message, a: str) -> int:
    return b.regularity(n, m, a)


def _true(b: DerivationBuilder) -> int:
    t = true()
    return b.ax("SelfKnowledge", t)


def _fact_consistency(b: DerivationBuilder, phi: Formula, m: Message, a: str) -> int:
    """¬([m]a false) <-> (([m]a φ) -> ¬[m]a ¬φ)."""
    box = lambda g: Proves(m, a, g)  # noqa: E731
    f = false()
    # left to right: □φ → □(¬φ → false), K, so □φ ∧ □¬φ → □false
    t1 = b.taut(Implies(phi, Implies(Not(phi), f)))
    r1 = _regularity(b, t1, m, a)
    k1 = b.ax("K", Implies(box(Implies(Not(phi), f)), Implies(box(Not(phi)), box(f))))
    lr = b.pl(Implies(Not(box(f)), Implies(box(phi), Not(box(Not(phi))))), r1, k1)
    # right to left: false implies anything once true is a theorem
    tr = _true(b)
    e1 = b.mp(tr, b.taut(Implies(true(), Implies(f, phi))))
    e2 = b.mp(tr, b.taut(Implies(true(), Implies(f, Not(phi)))))
    r2 = _regularity(b, e1, m, a)
    r3 = _regularity(b, e2, m, a)
    rl = b.pl(Implies(Implies(box(phi), Not(box(Not(phi)))), Not(box(f))), r2, r3)
    return b.pl(Iff(Not(box(f)), Implies(box(phi), Not(box(Not(phi))))), lr, rl)


def _fact_negation_as_implication(b: DerivationBuilder, phi: Formula, m: Message, a: str) -> int:
    """([m]a ¬φ) <-> [m]a (φ -> false)."""
    f = false()
    tr = _true(b)
    back = b.mp(tr, b.taut(Implies(true(), Implies(Implies(phi, f), Not(phi)))))
    forth = b.taut(Implies(Not(phi), Implies(phi, f)))
    iff = b.pl(Iff(Not(phi), Implies(phi, f)), forth, back)
    return b.regularity_iff(iff, m, a)


def _self_proof_of_truthfulness(b: DerivationBuilder, phi: Formula, m: Message, a: str) -> int:
    """[m]a (([m]a φ) -> φ)."""
    box = Proves(m, a, phi)
    l1 = b.ax("EpistemicTruthfulness", Implies(box, Implies(Knows(a, m), phi)))
    l2 = b.pl(Implies(Knows(a, m), Implies(box, phi)), l1)
    l3 = _regularity(b, l2, m, a)
    l4 = b.ax("SelfKnowledge", Proves(m, a, Knows(a, m)))
    return b.mp(l4, l3)


def _proof_density(b: DerivationBuilder, phi: Formula, m: Message, a: str) -> int:
    """([m]a [m]a φ) -> [m]a φ."""
    box = Proves(m, a, phi)
    l1 = _self_proof_of_truthfulness(b, phi, m, a)
    l2 = b.ax("K", Implies(b.formula(l1), Implies(Proves(m, a, box), box)))
    return b.mp(l1, l2)


def _maximal_consistency(b: DerivationBuilder, phi: Formula, m: Message, a: str) -> int:
    """([m]a ¬φ) <-> ¬[m]a φ."""
    box = lambda g: Proves(m, a, g)  # noqa: E731
    la = b.ax("ProofConsistency", Not(box(false())))
    lb = _fact_consistency(b, phi, m, a)
    lc = b.pl(Implies(box(phi), Not(box(Not(phi)))), la, lb)
    ld = b.pl(Implies(box(Not(phi)), Not(box(phi))), lc)
    le = b.ax("NegationCompleteness", Or(box(phi), box(Not(phi))))
    lf = b.pl(Implies(Not(box(phi)), box(Not(phi))), le)
    return b.pl(Iff(box(Not(phi)), Not(box(phi))), ld, lf)


def _proof_conjunctions(b: DerivationBuilder, phi: Formula, psi: Formula, m: Message, a: str) -> int:
    """(([m]a φ) & [m]a ψ) <-> [m]a (φ & ψ)."""
    box = lambda g: Proves(m, a, g)  # noqa: E731
    both = And(phi, psi)
    la = b.taut(Implies(phi, Implies(psi, both)))
    lb = _regularity(b, la, m, a)
    lc = b.ax("K", Implies(box(Implies(psi, both)), Implies(box(psi), box(both))))
    ld = b.pl(Implies(box(phi), Implies(box(psi), box(both))), lb, lc)
    le = b.pl(Implies(And(box(phi), box(psi)), box(both)), ld)
    lf = b.taut(Implies(both, phi))
    lg = _regularity(b, lf, m, a)
    lh = b.taut(Implies(both, psi))
    li = _regularity(b, lh, m, a)
    lj = b.pl(Implies(box(both), And(box(phi), box(psi))), lg, li)
    return b.pl(Iff(And(box(phi), box(psi)), box(both)), le, lj)


def _idp(b: DerivationBuilder, phi: Formula, psi: Formula, m: Message, a: str) -> int:
    """([m]a (φ | ψ)) <-> ([m]a φ) | [m]a ψ."""
    box = lambda g: Proves(m, a, g)  # noqa: E731
    nn = And(Not(phi), Not(psi))
    la = b.taut(Iff(box(Or(phi, psi)), box(Not(nn))))
    lb = _maximal_consistency(b, nn, m, a)
    lc = b.pl(Iff(box(Or(phi, psi)), Not(box(nn))), la, lb)
    ld = _proof_conjunctions(b, Not(phi), Not(psi), m, a)
    le = b.pl(Iff(Not(box(nn)), Not(And(box(Not(phi)), box(Not(psi))))), ld)
    lf = b.pl(Iff(box(Or(phi, psi)), Not(And(box(Not(phi)), box(Not(psi))))), lc, le)
    lg = b.taut(Iff(Not(And(box(Not(phi)), box(Not(psi)))), Or(Not(box(Not(phi))), Not(box(Not(psi))))))
    lh = b.pl(Iff(box(Or(phi, psi)), Or(Not(box(Not(phi))), Not(box(Not(psi))))), lf, lg)
    li = _maximal_consistency(b, phi, m, a)
    lj = b.pl(Iff(Not(box(Not(phi))), box(phi)), li)
    lk = _maximal_consistency(b, psi, m, a)
    ll = b.pl(Iff(Not(box(Not(psi))), box(psi)), lk)
    return b.pl(Iff(box(Or(phi, psi)), Or(box(phi), box(psi))), lh, lj, ll)


def _k_bis(b: DerivationBuilder, phi: Formula, psi: Formula, m: Message, a: str) -> int:
    """(([m]a φ) -> [m]a ψ) <-> [m]a (φ -> ψ)."""
    box = lambda g: Proves(m, a, g)  # noqa: E731
    imp = Implies(box(phi), box(psi))
    la = b.taut(Iff(imp, Or(Not(box(phi)), box(psi))))
    lb = _maximal_consistency(b, phi, m, a)
    lc = b.pl(Iff(imp, Or(box(Not(phi)), box(psi))), la, lb)
    ld = _idp(b, Not(phi), psi, m, a)
    le = b.pl(Iff(imp, box(Or(Not(phi), psi))), lc, ld)
    # φ → ψ and ¬φ ∨ ψ differ syntactically; bridge them under the modality
    t = b.taut(Iff(Or(Not(phi), psi), Implies(phi, psi)))
    r = b.regularity_iff(t, m, a)
    return b.pl(Iff(imp, box(Implies(phi, psi))), le, r)


def _bi_k(b: DerivationBuilder, phi: Formula, psi: Formula, m: Message, a: str) -> int:
    """([m]a (φ <-> ψ)) <-> (([m]a φ) <-> [m]a ψ)."""
    box = lambda g: Proves(m, a, g)  # noqa: E731
    fwd, bwd = Implies(phi, psi), Implies(psi, phi)
    c = _proof_conjunctions(b, fwd, bwd, m, a)
    k1 = _k_bis(b, phi, psi, m, a)
    k2 = _k_bis(b, psi, phi, m, a)
    return b.pl(Iff(box(Iff(phi, psi)), Iff(box(phi), box(psi))), c, k1, k2)


def _modal_idempotency(b: DerivationBuilder, phi: Formula, m: Message, a: str) -> int:
    """([m]a [m]a φ) <-> [m]a φ."""
    box = lambda g: Proves(m, a, g)  # noqa: E731
    la = _proof_density(b, phi, m, a)
    lb = _proof_density(b, Not(phi), m, a)
    lc = b.pl(Implies(Not(box(Not(phi))), Not(box(box(Not(phi))))), lb)
    ld = _maximal_consistency(b, phi, m, a)
    le = b.pl(Iff(Not(box(Not(phi))), box(phi)), ld)
    lf = b.pl(Implies(box(phi), Not(box(box(Not(phi))))), lc, le)
    lg = b.regularity_iff(ld, m, a)
    lh = b.pl(Iff(Not(box(box(Not(phi)))), Not(box(Not(box(phi))))), lg)
    li = b.pl(Implies(box(phi), Not(box(Not(box(phi))))), lf, lh)
    lj = _maximal_consistency(b, box(phi), m, a)
    lk = b.pl(Iff(Not(box(Not(box(phi)))), box(box(phi))), lj)
    ll = b.pl(Implies(box(phi), box(box(phi))), li, lk)
    return b.pl(Iff(box(box(phi)), box(phi)), la, ll)


def _modal_idempotency_bis(b: DerivationBuilder, phi: Formula, m: Message, a: str, c: str) -> int:
    """c knows m -> (([m]c [m]a φ) <-> [m]a φ)."""
    box_a = lambda g: Proves(m, a, g)  # noqa: E731
    box_c = lambda g: Proves(m, c, g)  # noqa: E731
    k = Knows(c, m)
    et1 = b.ax("EpistemicTruthfulness", Implies(box_c(box_a(phi)), Implies(k, box_a(phi))))
    la = b.pl(Implies(k, Implies(box_c(box_a(phi)), box_a(phi))), et1)
    et2 = b.ax("EpistemicTruthfulness", Implies(box_c(box_a(Not(phi))), Implies(k, box_a(Not(phi)))))
    lb = b.pl(Implies(k, Implies(box_c(box_a(Not(phi))), box_a(Not(phi)))), et2)
    lc = b.pl(Implies(k, Implies(Not(box_a(Not(phi))), Not(box_c(box_a(Not(phi)))))), lb)
    ld = _maximal_consistency(b, phi, m, a)
    le = b.pl(Iff(Not(box_a(Not(phi))), box_a(phi)), ld)
    lf = b.pl(Implies(k, Implies(box_a(phi), Not(box_c(box_a(Not(phi)))))), lc, le)
    lg = b.regularity_iff(ld, m, c)
    lh = b.pl(Iff(Not(box_c(box_a(Not(phi)))), Not(box_c(Not(box_a(phi))))), lg)
    li = b.pl(Implies(k, Implies(box_a(phi), Not(box_c(Not(box_a(phi)))))), lf, lh)
    lj = _maximal_consistency(b, box_a(phi), m, c)
    lk = b.pl(Iff(Not(box_c(Not(box_a(phi)))), box_c(box_a(phi))), lj)
    ll = b.pl(Implies(k, Implies(box_a(phi), box_c(box_a(phi)))), li, lk)
    return b.pl(Implies(k, Iff(box_c(box_a(phi)), box_a(phi))), la, ll)


def _five_law(b: DerivationBuilder, phi: Formula, m: Message, a: str) -> int:
    """¬([m]a φ) -> [m]a ¬[m]a φ."""
    box = lambda g: Proves(m, a, g)  # noqa: E731
    mc = _maximal_consistency(b, phi, m, a)
    l1 = b.pl(Implies(Not(box(phi)), box(Not(phi))), mc)
    mi = _modal_idempotency(b, Not(phi), m, a)
    l2 = b.pl(Implies(box(Not(phi)), box(box(Not(phi)))), mi)
    l3 = b.pl(Implies(Not(box(phi)), box(box(Not(phi)))), l1, l2)
    l4 = b.pl(Implies(box(Not(phi)), Not(box(phi))), mc)
    l5 = _regularity(b, l4, m, a)
    return b.pl(Implies(Not(box(phi)), box(Not(box(phi)))), l3, l5)


# ---------------------------------------------------------------------------
# Named corpus entries (instantiated at P, Q, message m, agents a and b)


def _single(fn, *args) -> DerivationBuilder:
    b = DerivationBuilder()
    fn(b, *args)
    return b


def build_regularity(phi: Formula = P, psi: Formula = Q, m: Message = M, a: str = "a") -> Derivation:
    """{φ -> ψ} ⊢ ([m]a φ) -> [m]a ψ, in four lines."""
    b = DerivationBuilder([Implies(phi, psi)])
    b.regularity(b.prem(1), m, a)
    return b.build("Fact2.1-regularity")


def derive_regularity(f: Formula, g: Formula, m: Message, a: str) -> Derivation:
    """Premise ``f -> g``, conclusion ``([m]a f) -> [m]a g``."""
    return build_regularity(f, g, m, a)


def build_t_law(phi: Formula = P, m: Message = M, a: str = "a") -> Derivation:
    b = DerivationBuilder()
    et = b.ax("EpistemicTruthfulness", Implies(Proves(m, a, phi), Implies(Knows(a, m), phi)))
    b.pl(Implies(Knows(a, m), Implies(Proves(m, a, phi), phi)), et)
    return b.build("Cor1-T-law")


def build_nc_from_idp(phi: Formula = P, m: Message = M, a: str = "a") -> Derivation:
    """Negation completeness from the disjunction property, used as a premise."""
    box = lambda g: Proves(m, a, g)  # noqa: E731
    idp = Implies(box(Or(phi, Not(phi))), Or(box(phi), box(Not(phi))))
    b = DerivationBuilder([idp])
    l1 = b.prem(1)
    l2 = b.taut(Or(phi, Not(phi)))
    l3 = b.nec(l2, m, a)
    b.mp(l3, l1)
    return b.build("S1.1.1-NC-from-IDP")


BUILDERS = {
    "Lemma1.1-self-proof-of-truthfulness": lambda: _single(_self_proof_of_truthfulness, P, M, "a"),
    "Lemma1.2-proof-density": lambda: _single(_proof_density, P, M, "a"),
    "Fact2.1-regularity": build_regularity,
    "Fact2.2-proof-consistency": lambda: _single(_fact_consistency, P, M, "a"),
    "Fact2.3-negation-as-implication": lambda: _single(_fact_negation_as_implication, P, M, "a"),
    "Thm2.1-maximal-consistency": lambda: _single(_maximal_consistency, P, M, "a"),
    "Thm2.2-proof-conjunctions-bis": lambda: _single(_proof_conjunctions, P, Q, M, "a"),
    "Thm2.3-IDP-bis": lambda: _single(_idp, P, Q, M, "a"),
    "Thm2.4-K-bis": lambda: _single(_k_bis, P, Q, M, "a"),
    "Thm2.5-Bi-K": lambda: _single(_bi_k, P, Q, M, "a"),
    "Thm2.6-modal-idempotency": lambda: _single(_modal_idempotency, P, M, "a"),
    "Thm2.7-modal-idempotency-bis": lambda: _single(_modal_idempotency_bis, P, M, "a", "b"),
    "Cor1-five-law": lambda: _single(_five_law, P, M, "a"),
    "Cor1-T-law": build_t_law,
    "S1.1.1-NC-from-IDP": build_nc_from_idp,
}


def build(name: str) -> Derivation:
    result = BUILDERS[name]()
    if isinstance(result, DerivationBuilder):
        return result.build(name)
    return result


def names() -> list[str]:
    return list(BUILDERS)


def render_entry(name: str) -> str:
    return render_derivation(build(name), AGENTS)


@lru_cache(maxsize=None)
def load(name: str) -> Derivation:
    """Read a shipped ``.drv`` file."""
    if name not in BUILDERS:
        raise KeyError(f"no corpus entry named {name!r}")
    text = resources.files(__package__).joinpath("corpus", f"{name}.drv").read_text()
    return parse_derivation(text, name=name)


def corpus() -> dict[str, Derivation]:
    """All shipped derivations, keyed by name."""
    return {n: load(n) for n in BUILDERS}


def write_corpus(directory) -> list[str]:
    """Regenerate the ``.drv`` files into ``directory``."""
    from pathlib import Path

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for n in BUILDERS:
        (out / f"{n}.drv").write_text(render_entry(n))
        written.append(n)
    return written


__all__ = ["BUILDERS", "build", "build_regularity", "corpus", "derive_regularity", "load", "names", "render_entry", "write_corpus"]
