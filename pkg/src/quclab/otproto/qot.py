"""OT from randomized OT by one-time pads.

Alice' gets ``(v0, v1)`` and Bob' gets ``c``.  Both talk to a randomized-OT
interface ``rot``: a functionality, or after composition a protocol
instance.  Alice' sends ``("t", s0^v0, s1^v1)`` and Bob' outputs
``s ^ t_c``.  Either party relays environment pokes to ``rot`` while it waits,
so outputs the interface still owes get released.
"""

from __future__ import annotations

from quclab.bitstrings import is_bitstring, xor_bits
from quclab.idealfunc import ALICE, BOB, F_ROT
from quclab.netexec import ENVIRONMENT, Machine, pack, unpack
from quclab.otproto.qrot import POKE

START = b"start"
TAG_T = b"t"


class AlicePrime(Machine):
    classical = True

    def __init__(self, ell: int, id: bytes = ALICE, bob: bytes = BOB, rot: bytes = F_ROT):
        super().__init__(id)
        self.ell, self.bob, self.rot = ell, bob, rot

    def initial_state(self):
        return {"v": None, "s": None, "done": False}

    def _maybe_send(self, state):
        if state["v"] is None or state["s"] is None:
            return None
        state["done"] = True
        t = [xor_bits(s, v) for s, v in zip(state["s"], state["v"])]
        return self.send(self.bob, pack(TAG_T, *t))

    def step(self, ctx, state, msg, qreg):
        if state["done"]:
            return None
        if msg.sender == ENVIRONMENT:
            if state["v"] is None:
                fields = unpack(msg.payload, 2)
                if not fields or not all(is_bitstring(f, self.ell) for f in fields):
                    return None
                state["v"] = fields
                return self._maybe_send(state) or self.send(self.rot, START)
            return self.send(self.rot, POKE)
        if msg.sender == self.rot and state["s"] is None:
            fields = unpack(msg.payload, 2)
            if not fields or not all(is_bitstring(f, self.ell) for f in fields):
                return None
            state["s"] = fields
            return self._maybe_send(state)
        return None


class BobPrime(Machine):
    classical = True

    def __init__(self, ell: int, id: bytes = BOB, alice: bytes = ALICE, rot: bytes = F_ROT):
        super().__init__(id)
        self.ell, self.alice, self.rot = ell, alice, rot

    def initial_state(self):
        return {"c": None, "s": None, "t": None, "done": False}

    def _maybe_output(self, state):
        if state["s"] is None or state["t"] is None:
            return None
        state["done"] = True
        return self.send(ENVIRONMENT, xor_bits(state["s"], state["t"][state["c"]]))

    def step(self, ctx, state, msg, qreg):
        if state["done"]:
            return None
        if msg.sender == ENVIRONMENT:
            if state["c"] is None and msg.payload in (b"0", b"1"):
                state["c"] = msg.payload[0] - 48
                return self.send(self.rot, msg.payload)
            if state["c"] is not None:
                return self.send(self.rot, POKE)
            return None
        if msg.sender == self.rot and state["s"] is None and is_bitstring(msg.payload, self.ell):
            state["s"] = msg.payload
            return self._maybe_output(state)
        if msg.sender == self.alice and state["t"] is None:
            fields = unpack(msg.payload, 3)
            if fields and fields[0] == TAG_T and all(is_bitstring(f, self.ell) for f in fields[1:]):
                state["t"] = fields[1:]
                return self._maybe_output(state) if state["c"] is not None else None
        return None
