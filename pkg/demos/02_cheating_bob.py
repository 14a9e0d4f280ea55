"""A receiver who never measures, and how often he gets away with it.

Bob keeps every qubit and commits to made-up bases and values.  Alice opens
the commitments on a random test set and checks the positions where her
basis agrees with his claim.  Each tested position catches him with
probability 1/4, so he survives d tests with probability (3/4)^d.
"""

from fractions import Fraction

from quclab.adversim import PASS, BobStrategy, attack_world, hoeffding_radius, verdict
from quclab.netexec import ExactTree, ExecConfig, Sample, exec_network, run_trials
from quclab.otproto import ProtocolParams

print(" d   exact pass rate   (3/4)^d")
for d in range(1, 7):
    params = ProtocolParams(n=1, m=1 + d, ell=1)
    commit = b"01" * params.m
    net = attack_world(params, BobStrategy.no_measure_random_commit(commit), stop_at_theta=True,
                       alice_source="epr")
    dist = exec_network(net, ExecConfig(mode=ExactTree(), qubit_cap=40))
    rate = dist.probability(lambda o: verdict(o) == PASS)
    print(f"{d:2d}   {str(rate):>15}   {str(Fraction(3, 4) ** d):>8}")

# Sixteen tests are too many to enumerate, so sample instead.
params = ProtocolParams(n=1, m=17, ell=1)
trials = 20_000
net = attack_world(params, BobStrategy.no_measure_random_commit(b"0" * 34), stop_at_theta=True,
                   alice_source="epr")
counts = run_trials(net, ExecConfig(mode=Sample(1), qubit_cap=40), trials, seed=1)
rate = sum(c for o, c in counts.items() if verdict(o) == PASS) / trials
print(f"d=16: sampled {rate:.4f} from {trials} trials, expected {0.75 ** 16:.4f} "
      f"+- {hoeffding_radius(trials):.4f} at 99%")
