"""Plugging the quantum protocol into the OT-from-ROT construction.

OT from randomized OT is a one-line classical protocol: Alice masks her
strings with the random ones, Bob unmasks his.  Composing it with the
quantum randomized-OT protocol gives a network of different machines that
behaves exactly like the direct quantum OT protocol.  The classical
wrapper, which measures everything a machine sends or receives, leaves
classical machines alone.
"""

from quclab.adversim import HonestDriver, tv_distance
from quclab.idealfunc import ALICE, BOB
from quclab.netexec import DummyAdversary, ExactTree, ExecConfig, Network, classical_wrapper, compose, exec_network, pack
from quclab.otproto import ProtocolParams, pi_qot, pi_qot_prime, pi_qrot

exact = ExecConfig(mode=ExactTree())
params = ProtocolParams(n=1, m=2, ell=1)
env = HonestDriver([(BOB, b"1"), (ALICE, pack(b"0", b"1"))], [BOB], poke=[ALICE, BOB])

composed = compose(pi_qot_prime(params), pi_qrot(params), 1)
print("composed machines:", ", ".join(m.id.decode() for m in composed.machines))
direct = exec_network(pi_qot(params).network(env, DummyAdversary()), exact)
via_rot = exec_network(composed.network(env, DummyAdversary()), exact)
print("TV(direct, composed) =", tv_distance(direct, via_rot))

net = pi_qot_prime(params).network(env, DummyAdversary())
wrapped = Network([classical_wrapper(m) if m.classical else m for m in net.machines], net.parties)
print("classical machines:", ", ".join(repr(m) for m in net.machines if m.classical))
print("TV(plain, wrapped) =", tv_distance(exec_network(net, exact), exec_network(wrapped, exact)))
