"""Simulators: adversaries that emulate the rest of the real world internally.

An :class:`Emulator` holds private copies of machines (typically the dummy
adversary, corruption parties and whatever honest machines the simulator
has to fake) and runs them with the kernel's activation rule until a
message has to leave.  Leaving is possible in three ways:

* a message to the environment from the internal adversary is emitted
  directly, since the emulator carries the adversary id;
* a message from an internal stand-in for ``P`` to the environment goes out
  through the external corruption party ``P``; for replayed parties (honest
  programs run on behalf of a corrupted party) this holds for any outside
  recipient;
* a message to one of the ``exits`` ids is translated by that exit.

Anything else that addresses a machine the emulator does not know is
absorbed, just as the kernel would absorb it in the world being faked.
"""

from __future__ import annotations

from typing import Callable, Iterable

from quclab.bitstrings import restrict, xor_bits
from quclab.idealfunc import ALICE, BOB, COMMIT, F_ROT, OPEN, FCom, FComEquivocal, ideal_rot
from quclab.netexec import (
    ADVERSARY,
    ENVIRONMENT,
    ClassicalMessage,
    CorruptionParty,
    DummyAdversary,
    Machine,
    Network,
    Out,
    Protocol,
    activate,
    corrupt,
    pack,
)
from quclab.otproto import BobQROT, ProtocolParams, pi_qrot
from quclab.otproto.hashing import hash_eval
from quclab.otproto.networks import commitment_machines
from quclab.otproto.qrot import theta_label, x_label
from quclab.qcore import bases_from_bits

SIM_OUT = b"sim-out"
INTERNAL_BUDGET = 100_000


class _Everyone:
    """Recipient check that defers routing decisions to :class:`Emulator`."""

    def __contains__(self, mid) -> bool:
        return True


class Emulator(Machine):
    """Adversary machine running ``internal`` machines on the shared pool.

    ``corrupted`` lists parties that are corruption parties on the outside
    and have an internal stand-in.  Messages arriving from the external
    corruption party ``P`` are handed to the internal adversary verbatim,
    unless ``P`` is in ``replayed``, in which case the wrapped original is
    delivered to the internal ``P`` itself.
    """

    def __init__(self, internal: Iterable[Machine], corrupted: Iterable[bytes] = (),
                 replayed: Iterable[bytes] = (), exits: dict[bytes, Callable] | None = None,
                 id: bytes = ADVERSARY, budget: int = INTERNAL_BUDGET, name: str = ""):
        super().__init__(id)
        self.internal = {m.id: m for m in internal}
        self.corrupted = frozenset(corrupted)
        self.replayed = frozenset(replayed)
        self.exits = dict(exits or {})
        self.budget = budget
        self.name = name or "emulator"
        self.known = _Everyone()
        if ADVERSARY in self.internal and self.internal[ADVERSARY].id != ADVERSARY:
            raise ValueError("internal adversary must carry the adversary id")

    def initial_state(self):
        return {mid: m.initial_state() for mid, m in self.internal.items()}

    def copy_state(self, state):
        return {mid: self.internal[mid].copy_state(st) for mid, st in state.items()}

    def _entry(self, msg: ClassicalMessage) -> ClassicalMessage | None:
        if msg.sender in self.replayed:
            inner = ClassicalMessage.parse(msg.payload)
            if inner is None or inner.recipient != msg.sender:
                return None
            return inner
        if ADVERSARY in self.internal:
            return msg
        return None

    def step(self, ctx, state, msg, qreg):
        cur = self._entry(msg)
        if cur is None:
            return None
        for _ in range(self.budget):
            machine = self.internal.get(cur.recipient)
            if machine is None:
                return None
            t = activate(machine, state[machine.id], ctx, cur, qreg, self.known)
            if t.note:
                return None
            cur, qreg = t.msg, t.qreg
            if cur.recipient in self.internal:
                continue
            if cur.recipient in self.exits:
                return self.exits[cur.recipient](self, cur, qreg)
            if cur.recipient == ENVIRONMENT and cur.sender == ADVERSARY:
                return Out(ClassicalMessage(self.id, ENVIRONMENT, cur.payload), qreg)
            if cur.sender in self.replayed or (cur.recipient == ENVIRONMENT and cur.sender in self.corrupted):
                return self.through(cur.sender, cur, qreg)
            ctx.pool.release(qreg)
            return None
        return None

    def through(self, party: bytes, msg: ClassicalMessage, qreg=None) -> Out:
        """Have the external corruption party ``party`` emit ``msg``."""
        return Out(ClassicalMessage(self.id, party, msg.encode()), qreg)

    def __repr__(self) -> str:
        return f"Emulator({self.name})"


class SimulatedBob(BobQROT):
    """Bob as run inside the corrupted-Alice simulator.

    Commitments go to equivocal commitment instances and carry no value.
    Qubits are kept: those in the test set are measured, in fresh random
    bases, only when Alice asks for the openings; the rest are measured in
    Alice's announced bases.  The partition is uniformly random, and at the
    end both ``s_i = m_i xor f_i(x|I_i)`` are handed to the exit ``sim-out``.
    """

    def __init__(self, params: ProtocolParams):
        super().__init__(params, "rot", "fcom", record_view=False)

    def initial_state(self):
        state = super().initial_state()
        state["c"] = 0  # never used; the real choice bit lives with the ideal functionality
        return state

    def _receive_qubits(self, ctx, state, qreg):
        state["held"] = qreg
        commits = []
        for i in range(self.p.m):
            commits += [(theta_label(i + 1), COMMIT), (x_label(i + 1), COMMIT)]
        return commits

    def _openings(self, ctx, state, T):
        out = []
        for i in T:
            basis = ctx.random_bits(1)
            x = ctx.measure(state["held"].select([i]), bases_from_bits(basis))
            out.append((theta_label(i + 1), pack(OPEN, basis)))
            out.append((x_label(i + 1), pack(OPEN, x)))
        ctx.pool.release(state["held"].select(T))
        return out

    def _partition(self, ctx, state):
        retained = state["held"].select(state["retained"])
        state["x_b"] = ctx.measure(retained, bases_from_bits(state["theta_a"]))
        ctx.pool.release(retained)
        i0 = ctx.random_bits(self.p.n)
        i1 = bytes(97 - b for b in i0)
        return i0, i1

    def _finish(self, ctx, state, fs, ms, ts):
        s = tuple(
            xor_bits(ms[i], hash_eval(fs[i], restrict(state["x_b"], state["parts"][i]))) for i in (0, 1)
        )
        return [self.send(SIM_OUT, pack(*s))]


def feed_rot(sim: Emulator, msg: ClassicalMessage, qreg) -> Out:
    """Input ``(s0, s1)`` to the ideal functionality in the name of corrupted Alice."""
    return sim.through(ALICE, ClassicalMessage(ALICE, F_ROT, msg.payload), qreg)


def simulator_corrupted_alice(params: ProtocolParams) -> Emulator:
    internal = [DummyAdversary(), CorruptionParty(ALICE), SimulatedBob(params)]
    internal += commitment_machines(params, FComEquivocal)
    return Emulator(internal, corrupted=[ALICE], exits={SIM_OUT: feed_rot}, name="corrupted-alice")


NO_CORRUPTION = "none"
BOTH_CORRUPTED = "both"


def simulator_trivial(case: str, params: ProtocolParams | None = None) -> Machine:
    """Simulator when no party or both parties are corrupted."""
    if case == NO_CORRUPTION:
        return DummyAdversary()
    if case == BOTH_CORRUPTED:
        if params is None:
            raise ValueError("the both-corrupted simulator needs the protocol parameters")
        internal = [DummyAdversary(), CorruptionParty(ALICE), CorruptionParty(BOB)]
        internal += commitment_machines(params, FCom)
        return Emulator(internal, corrupted=[ALICE, BOB], name="both-corrupted")
    raise ValueError(f"unknown trivial case {case!r}")


def replay_adversary(protocol: Protocol, parties: Iterable[bytes]) -> Emulator:
    """Adversary that runs the honest programs of the corrupted ``parties``."""
    parties = list(parties)
    internal = [protocol.by_id[p] for p in parties]
    return Emulator(internal, corrupted=parties, replayed=parties, name="replay")


# -- worlds -------------------------------------------------------------------


def real_world(params: ProtocolParams, corrupted: Iterable[bytes], environment: Machine,
               adversary: Machine | None = None) -> Network:
    proto = corrupt(pi_qrot(params), corrupted)
    return proto.network(environment, adversary or DummyAdversary())


def ideal_world(params: ProtocolParams, corrupted: Iterable[bytes], environment: Machine,
                simulator: Machine) -> Network:
    return ideal_rot(params.ell, corrupted).network(environment, simulator)


__all__ = [
    "BOTH_CORRUPTED", "Emulator", "NO_CORRUPTION", "SIM_OUT", "SimulatedBob", "feed_rot",
    "ideal_world", "real_world", "replay_adversary", "simulator_corrupted_alice", "simulator_trivial",
]
