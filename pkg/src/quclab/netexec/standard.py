"""Standard machines: corruption parties, dummies and the classical wrapper."""

from __future__ import annotations

from typing import Iterable

from quclab.errors import UnknownParty
from quclab.netexec.machine import Machine, Out
from quclab.netexec.messages import ADVERSARY, ENVIRONMENT, ClassicalMessage
from quclab.netexec.network import Network, Protocol


class CorruptionParty(Machine):
    """Stands in for a corrupted party and obeys the adversary.

    A message from the adversary carries the encoding of the message to emit
    (sender and recipient included); everything else is wrapped and handed
    to the adversary.  Qubits travel along untouched in both directions.
    """

    classical = True

    def step(self, ctx, state, msg, qreg):
        if msg.sender == ADVERSARY:
            return Out(msg.payload, qreg)
        return Out(ClassicalMessage(self.id, ADVERSARY, msg.encode()), qreg)


class DummyParty(Machine):
    """Forwards between the environment and one functionality."""

    classical = True

    def __init__(self, id: bytes, func_id: bytes):
        super().__init__(id)
        if func_id == id:
            raise ValueError("dummy party and functionality ids must differ")
        self.func_id = func_id

    def step(self, ctx, state, msg, qreg):
        if msg.sender == ENVIRONMENT:
            return self.send(self.func_id, msg.payload, qreg)
        if msg.sender == self.func_id:
            return self.send(ENVIRONMENT, msg.payload, qreg)
        return None


def make_dummy_party(party_id: bytes, func_id: bytes) -> DummyParty:
    return DummyParty(party_id, func_id)


class DummyAdversary(Machine):
    """Relays between the environment and the rest of the network."""

    classical = True

    def __init__(self, id: bytes = ADVERSARY):
        super().__init__(id)

    def step(self, ctx, state, msg, qreg):
        if msg.sender == ENVIRONMENT:
            return Out(msg.payload, qreg)
        return Out(ClassicalMessage(self.id, ENVIRONMENT, msg.encode()), qreg)


def dummy_adversary() -> DummyAdversary:
    return DummyAdversary()


class ClassicalWrapper(Machine):
    """``C(M)``: measure the quantum register before and after ``M`` runs."""

    def __init__(self, inner: Machine):
        super().__init__(inner.id)
        self.inner = inner
        self.classical = True

    def initial_state(self):
        return self.inner.initial_state()

    def copy_state(self, state):
        return self.inner.copy_state(state)

    def step(self, ctx, state, msg, qreg):
        ctx.classicalize(qreg)
        out = self.inner.step(ctx, state, msg, qreg)
        if out is not None:
            if not isinstance(out, Out):
                out = Out(out)
            ctx.classicalize(out.quantum)
        return out

    def __repr__(self) -> str:
        return f"C({self.inner!r})"


def classical_wrapper(machine: Machine) -> ClassicalWrapper:
    return ClassicalWrapper(machine)


def corrupt(target: Network | Protocol, corrupted: Iterable[bytes]):
    """Replace the parties in ``corrupted`` by corruption parties."""
    corrupted = frozenset(corrupted)
    unknown = corrupted - target.parties
    if unknown:
        raise UnknownParty(f"not parties of the network: {sorted(unknown)}")
    if not corrupted:
        return target
    return target.replace(*(CorruptionParty(pid) for pid in sorted(corrupted)))
