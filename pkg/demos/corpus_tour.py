"""Tour of the built-in derivations.

Every entry is checked line by line, and its conclusion is tested
against every model with up to three states.  The shortest entries are
printed in full.

Run with ``python3 demos/corpus_tour.py``.
"""

from ldiip import corpus
from ldiip.model import small_countermodel
from ldiip.proof import check_derivation
from ldiip.syntax import pretty

entries = corpus.corpus()
width = max(map(len, entries))
for name, d in entries.items():
    verdict = check_derivation(d)
    refuted = small_countermodel(d.conclusion, 3, d.premises)
    semantic = "no small counter-model" if refuted is None else "REFUTED"
    print(f"{name.ljust(width)}  {len(d):4d} lines  {verdict}  {semantic}")
    print(f"{'':{width}}  {pretty(d.conclusion)}")

for name in ("Fact2.1-regularity", "S1.1.1-NC-from-IDP"):
    print()
    print(corpus.render_entry(name), end="")
