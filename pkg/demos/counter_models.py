"""Which principles fail, and why: small counter-models from the decider.

Run with ``python3 demos/counter_models.py``.
"""

from ldiip.decide import CounterModel, decide
from ldiip.model import render_model
from ldiip.syntax import parse_formula, pretty

CANDIDATES = [
    # A proof is only as good as the verifier's grip on it.
    ("([m]a P) -> P", "proofs alone do not make things true"),
    ("a knows m -> (([m]a P) -> P)", "...but once a holds m they do"),
    # Extra material can change what a message proves.
    ("([m]a P) -> [(m, n)]a P", "proof is not monotone in the message"),
    ("([m]a P) | [m]a ~P", "every message settles every statement"),
    ("a knows m", "knowledge is never free"),
]

for text, gloss in CANDIDATES:
    f = parse_formula(text)
    verdict = decide(f, max_states=4)
    print(f"{pretty(f)}    [{gloss}]")
    print(f"  -> {verdict}")
    if isinstance(verdict, CounterModel):
        for line in render_model(verdict.model).splitlines():
            print(f"     {line}")
    print()
