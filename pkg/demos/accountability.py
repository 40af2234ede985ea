"""Signed logs as decisive evidence.

Agent b publishes a signed log.  Whoever receives it (a verifier a, or
an outside auditor c) can read off whether b behaved correctly: the log
proves either ``Correct_b`` or its negation, and because the receiver
holds the log, whichever side it proves is true.

Run with ``python3 demos/accountability.py``.
"""

from ldiip.concrete import ZERO, Recv, eval_concrete, knows, render_state
from ldiip.proof import is_axiom
from ldiip.syntax import Atom, Not, Or, Prop, Proves, Sig, pretty

correct = Prop("Correct_b")
log = Sig(Atom("log"), "b")

for receiver in ("a", "c"):
    proves_yes = Proves(log, receiver, correct)
    proves_no = Proves(log, receiver, Not(correct))
    decider = Or(proves_yes, proves_no)
    print(f"receiver {receiver}: {pretty(decider)} is an instance of {is_axiom(decider)}")
    for behaved in (True, False):
        val = {"Correct_b": lambda _s, v=behaved: v}
        after = Recv(receiver, log, ZERO)
        side = "Correct_b" if eval_concrete(proves_yes, after, val) else "~Correct_b"
        print(
            f"  b behaved {'correctly' if behaved else 'badly'}; at {render_state(after)} "
            f"{receiver} knows the log: {knows(receiver, log, after)}, the log proves {side}"
        )
    print()
