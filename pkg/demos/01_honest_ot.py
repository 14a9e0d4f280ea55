"""Honest oblivious transfer from BB84 qubits and commitments.

Alice holds two strings, Bob a choice bit.  We run the protocol once with
sampled randomness and print the messages, then enumerate every branch of
a tiny instance to see that Bob gets his string with probability exactly 1.
"""

from fractions import Fraction

from quclab.adversim import HonestDriver
from quclab.idealfunc import ALICE, BOB
from quclab.netexec import DummyAdversary, ExactTree, ExecConfig, Sample, exec_network, pack, unpack
from quclab.otproto import ProtocolParams, pi_qot

params = ProtocolParams(n=3, m=5, ell=2)
v0, v1 = b"01", b"10"
env = HonestDriver([(BOB, b"1"), (ALICE, pack(v0, v1))], [BOB], poke=[ALICE, BOB])
net = pi_qot(params).network(env, DummyAdversary())

res = exec_network(net, ExecConfig(mode=Sample(seed=7), record_trace=True))
print(f"one sampled run at n={params.n}, m={params.m}: {res.steps} activations")
for e in res.trace:
    if e.note:
        continue
    shown = unpack(e.payload)
    label = shown[0].decode(errors="replace") if shown else e.payload.decode(errors="replace")
    qubits = f"  [{e.qsize} qubits]" if e.qsize else ""
    print(f"  {e.sender.decode():>12} -> {e.recipient.decode():<12} {label[:24]}{qubits}")

_, outputs = unpack(res.output, 2)
print("Bob's output:", unpack(unpack(outputs)[0], 2)[1], "(wanted v1 =", v1, ")")

# The same question, answered exactly at the smallest interesting size.
tiny = ProtocolParams(n=1, m=2, ell=1)
for c in (b"0", b"1"):
    env = HonestDriver([(BOB, c), (ALICE, pack(b"0", b"1"))], [BOB], poke=[ALICE, BOB])
    dist = exec_network(pi_qot(tiny).network(env, DummyAdversary()), ExecConfig(mode=ExactTree()))
    got = {unpack(unpack(unpack(o, 2)[1])[0], 2)[1]: p for o, p in dist.items()}
    print(f"c={c.decode()}: Bob's output law {dict((k.decode(), str(p)) for k, p in got.items())} "
          f"over {dist.branches} branches")
    assert got == {c: Fraction(1)}
