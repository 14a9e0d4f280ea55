"""Ideal functionalities as machines, and the trivially extractable commitment.

All functionalities are classical.  Inputs that do not fit the current phase
are absorbed: the machine leaves the register unparseable and the
environment runs next.
"""

from __future__ import annotations

from typing import Iterable

from quclab.bitstrings import is_bitstring
from quclab.netexec import (
    ENVIRONMENT,
    ClassicalMessage,
    DummyParty,
    Machine,
    Protocol,
    corrupt,
    pack,
    unpack,
)

ALICE = b"Alice"
BOB = b"Bob"
F_ROT = b"F_ROT"
F_OT = b"F_OT"
F_COM = b"F_COM"
F_AND = b"F_AND"

COMMIT = b"commit"
COMMITTED = b"committed"
OPEN = b"open"
REJECT = b"reject"

EMPTY, COMMITTED_PHASE, OPENED = "empty", "committed", "opened"


def _bit(payload: bytes) -> int | None:
    return {b"0": 0, b"1": 1}.get(payload)


class FCom(Machine):
    """Commitment from ``sender`` to ``recipient`` on ``ell``-bit strings."""

    classical = True

    def __init__(self, id: bytes = F_COM, ell: int = 1, sender: bytes = BOB, recipient: bytes = ALICE):
        super().__init__(id)
        if ell < 1:
            raise ValueError("commitment length must be at least 1")
        self.ell = ell
        self.sender = sender
        self.recipient = recipient

    def initial_state(self):
        return {"phase": EMPTY, "x": b""}

    def step(self, ctx, state, msg, qreg):
        if msg.sender != self.sender:
            return None
        if state["phase"] == EMPTY:
            fields = unpack(msg.payload, 2)
            if fields and fields[0] == COMMIT and is_bitstring(fields[1], self.ell):
                state["phase"], state["x"] = COMMITTED_PHASE, fields[1]
                return self.send(self.recipient, COMMITTED)
        elif state["phase"] == COMMITTED_PHASE and msg.payload == OPEN:
            state["phase"] = OPENED
            return self.send(self.recipient, pack(OPEN, state["x"]))
        return None


class FComEquivocal(FCom):
    """Commitment in which the sender fixes the value only when opening."""

    def step(self, ctx, state, msg, qreg):
        if msg.sender != self.sender:
            return None
        if state["phase"] == EMPTY and msg.payload == COMMIT:
            state["phase"] = COMMITTED_PHASE
            return self.send(self.recipient, COMMITTED)
        if state["phase"] == COMMITTED_PHASE:
            fields = unpack(msg.payload, 2)
            if fields and fields[0] == OPEN and is_bitstring(fields[1], self.ell):
                state["phase"], state["x"] = OPENED, fields[1]
                return self.send(self.recipient, msg.payload)
        return None


def f_com(ell: int, sender: bytes = BOB, recipient: bytes = ALICE, id: bytes = F_COM) -> FCom:
    return FCom(id, ell, sender, recipient)


def f_com_equivocal(ell: int, sender: bytes = BOB, recipient: bytes = ALICE, id: bytes = F_COM) -> FComEquivocal:
    return FComEquivocal(id, ell, sender, recipient)


class FOT(Machine):
    """Oblivious transfer: ``(s0, s1)`` from A and ``c`` from B, in either order."""

    classical = True

    def __init__(self, id: bytes = F_OT, ell: int = 1, a: bytes = ALICE, b: bytes = BOB):
        super().__init__(id)
        if ell < 1:
            raise ValueError("OT string length must be at least 1")
        self.ell, self.a, self.b = ell, a, b

    def initial_state(self):
        return {"s": None, "c": None, "done": False}

    def _accept(self, state, msg) -> bool:
        if msg.sender == self.a and state["s"] is None:
            fields = unpack(msg.payload, 2)
            if fields and all(is_bitstring(f, self.ell) for f in fields):
                state["s"] = fields
                return True
        elif msg.sender == self.b and state["c"] is None and _bit(msg.payload) is not None:
            state["c"] = _bit(msg.payload)
            return True
        return False

    def step(self, ctx, state, msg, qreg):
        if state["done"] or not self._accept(state, msg):
            return None
        if state["s"] is None or state["c"] is None:
            return None
        state["done"] = True
        return self.send(self.b, state["s"][state["c"]])


def f_ot(ell: int, id: bytes = F_OT) -> FOT:
    return FOT(id, ell)


class FROT(FOT):
    """Randomized OT.

    With an uncorrupted sender the functionality samples ``s0, s1`` itself
    once ``c`` arrives, and owes two outputs: ``s_c`` to B first, then
    ``(s0, s1)`` to A.  Pending outputs are released one per activation by any
    further message from A or B.  With a corrupted sender it is plain OT.
    """

    def __init__(self, id: bytes = F_ROT, ell: int = 1, a_corrupted: bool = False,
                 a: bytes = ALICE, b: bytes = BOB):
        super().__init__(id, ell, a, b)
        self.a_corrupted = a_corrupted

    def initial_state(self):
        state = super().initial_state()
        state["outbox"] = ()
        return state

    def step(self, ctx, state, msg, qreg):
        if self.a_corrupted:
            return super().step(ctx, state, msg, qreg)
        if msg.sender not in (self.a, self.b):
            return None
        if msg.sender == self.b and state["c"] is None and _bit(msg.payload) is not None:
            c = _bit(msg.payload)
            s0, s1 = ctx.random_bits(self.ell), ctx.random_bits(self.ell)
            state["c"], state["s"], state["done"] = c, (s0, s1), True
            state["outbox"] = (self.send(self.b, (s0, s1)[c]), self.send(self.a, pack(s0, s1)))
        if not state["outbox"]:
            return None
        out, state["outbox"] = state["outbox"][0], state["outbox"][1:]
        return out


def f_rot(ell: int, a_corrupted: bool = False, id: bytes = F_ROT) -> FROT:
    return FROT(id, ell, a_corrupted)


class FAND(Machine):
    """On bit ``a`` from Alice and ``b`` from Bob, both learn ``a*b`` (Alice first)."""

    classical = True

    def __init__(self, id: bytes = F_AND, a: bytes = ALICE, b: bytes = BOB):
        super().__init__(id)
        self.a, self.b = a, b

    def initial_state(self):
        return {"a": None, "b": None, "outbox": ()}

    def step(self, ctx, state, msg, qreg):
        key = {self.a: "a", self.b: "b"}.get(msg.sender)
        if key is None:
            return None
        if state[key] is None and _bit(msg.payload) is not None:
            state[key] = _bit(msg.payload)
            if state["a"] is not None and state["b"] is not None:
                out = str(state["a"] * state["b"]).encode()
                state["outbox"] = (self.send(self.a, out), self.send(self.b, out))
        if not state["outbox"]:
            return None
        out, state["outbox"] = state["outbox"][0], state["outbox"][1:]
        return out


def f_and(id: bytes = F_AND) -> FAND:
    return FAND(id)


# -- trivially extractable commitment --------------------------------------


def commit_message(m: bytes) -> bytes:
    return pack(COMMIT, m)


def open_message(m: bytes | None = None) -> bytes:
    return OPEN if m is None else pack(OPEN, m)


def parse_commit(payload: bytes) -> bytes | None:
    fields = unpack(payload, 2)
    if fields and fields[0] == COMMIT:
        return fields[1]
    return None


def check_open(committed: bytes, payload: bytes) -> bytes | None:
    """Value revealed by an opening of ``committed``, or ``None`` to reject."""
    if payload == OPEN:
        return committed
    fields = unpack(payload, 2)
    if fields and fields[0] == OPEN and fields[1] == committed:
        return committed
    return None


def extract_commitment(transcript: Iterable[ClassicalMessage]) -> bytes | None:
    """Read the committed value off the commit message, which is in the clear."""
    for msg in transcript:
        m = parse_commit(msg.payload)
        if m is not None:
            return m
    return None


class TrivialCommitSender(Machine):
    """Environment input ``(commit, m)`` then ``open``; everything goes out in clear."""

    classical = True

    def __init__(self, id: bytes = BOB, recipient: bytes = ALICE):
        super().__init__(id)
        self.recipient = recipient

    def initial_state(self):
        return {"m": None, "opened": False}

    def step(self, ctx, state, msg, qreg):
        if msg.sender != ENVIRONMENT:
            return None
        m = parse_commit(msg.payload)
        if state["m"] is None and m is not None:
            state["m"] = m
            return self.send(self.recipient, commit_message(m))
        if state["m"] is not None and not state["opened"] and msg.payload == OPEN:
            state["opened"] = True
            return self.send(self.recipient, open_message(state["m"]))
        return None


class TrivialCommitReceiver(Machine):
    """Outputs ``committed``, then ``(open, m)`` or ``reject`` on a contradicting opening."""

    classical = True

    def __init__(self, id: bytes = ALICE, sender: bytes = BOB):
        super().__init__(id)
        self.sender = sender

    def initial_state(self):
        return {"m": None, "done": False}

    def step(self, ctx, state, msg, qreg):
        if msg.sender != self.sender or state["done"]:
            return None
        if state["m"] is None:
            m = parse_commit(msg.payload)
            if m is None:
                return None
            state["m"] = m
            return self.send(ENVIRONMENT, COMMITTED)
        state["done"] = True
        value = check_open(state["m"], msg.payload)
        if value is None:
            return self.send(ENVIRONMENT, REJECT)
        return self.send(ENVIRONMENT, pack(OPEN, value))


def trivial_commitment_protocol(sender: bytes = BOB, recipient: bytes = ALICE) -> Protocol:
    return Protocol(
        [TrivialCommitSender(sender, recipient), TrivialCommitReceiver(recipient, sender)],
        parties=[sender, recipient],
        name="com",
    )


def ideal_protocol(functionality: Machine, parties: Iterable[bytes], name: str = "") -> Protocol:
    """Dummy parties wired to ``functionality``."""
    parties = list(parties)
    machines = [DummyParty(p, functionality.id) for p in parties] + [functionality]
    return Protocol(machines, parties, name=name or functionality.id.decode())


def ideal_rot(ell: int, corrupted: Iterable[bytes] = ()) -> Protocol:
    corrupted = frozenset(corrupted)
    proto = ideal_protocol(FROT(F_ROT, ell, a_corrupted=ALICE in corrupted), [ALICE, BOB], "F_ROT")
    return corrupt(proto, corrupted)


def ideal_ot(ell: int, corrupted: Iterable[bytes] = ()) -> Protocol:
    return corrupt(ideal_protocol(FOT(F_OT, ell), [ALICE, BOB], "F_OT"), corrupted)
