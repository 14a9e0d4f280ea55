"""A corrupted sender cannot tell the real protocol from a simulation.

The environment scripts a misbehaving Alice (lying about bases, sending
Bell pairs, aborting, injecting junk).  In the real world her messages reach
honest Bob; in the ideal world they reach a simulator that never learns
Bob's choice bit and only talks to the randomized-OT functionality.  For
every script the two output distributions coincide exactly.
"""

from quclab.adversim import corrupted_alice_suite, load_corpus
from quclab.otproto import EXACT_PARAMS

corpus = load_corpus()
width = max(len(s.name) for s in corpus)
results = corrupted_alice_suite(EXACT_PARAMS, corpus)
for spec, r in zip(corpus, results):
    print(f"{spec.name:<{width}}  TV={str(r.tv):<3} real {len(r.real):4d} outcomes  {spec.description}")
print("all perfect:", all(r.perfect for r in results))
