"""Reactive machines and the context handed to them on activation."""

from __future__ import annotations

from math import comb
from typing import NamedTuple

from quclab.bitstrings import from_int
from quclab.netexec.messages import ClassicalMessage
from quclab.qcore import Basis, QubitPool, QubitRegister, bases_from_bits

_CHUNK = 16


class Out(NamedTuple):
    """What a machine leaves in the communication registers.

    ``classical`` is either a parsed message or raw bytes that the kernel
    will try to parse.
    """

    classical: ClassicalMessage | bytes
    quantum: QubitRegister | None = None


class Context:
    """Per-execution services: security parameter, input, qubit pool, randomness."""

    __slots__ = ("k", "z", "pool", "chooser")

    def __init__(self, k: int, pool: QubitPool, chooser, z: bytes = b""):
        self.k = k
        self.z = z
        self.pool = pool
        self.chooser = chooser

    def coin(self) -> int:
        return self.chooser.uniform(2)

    def random_bits(self, n: int) -> bytes:
        out = b""
        while n > 0:
            take = min(n, _CHUNK)
            out += from_int(self.chooser.uniform(1 << take), take)
            n -= take
        return out

    def random_bases(self, n: int) -> tuple[Basis, ...]:
        return bases_from_bits(self.random_bits(n))

    def random_subset(self, m: int, size: int) -> tuple[int, ...]:
        """Uniform ``size``-subset of ``range(m)``, as a sorted tuple."""
        rank = self.chooser.uniform(comb(m, size))
        return unrank_combination(m, size, rank)

    def measure(self, reg: QubitRegister, bases) -> bytes:
        return self.pool.measure(reg, bases, self.chooser)

    def classicalize(self, reg: QubitRegister | None) -> bytes:
        return self.pool.classicalize(reg, self.chooser)


def unrank_combination(m: int, size: int, rank: int) -> tuple[int, ...]:
    """The ``rank``-th ``size``-subset of ``range(m)`` in lexicographic order."""
    out = []
    x = 0
    for remaining in range(size, 0, -1):
        while True:
            c = comb(m - x - 1, remaining - 1)
            if rank < c:
                break
            rank -= c
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


class Machine:
    """A reactive machine identified by a nonempty byte string.

    ``step`` receives a mutable state dict (a private copy when the kernel
    needs to keep the old one), the incoming classical message and quantum
    register, and returns an :class:`Out` or ``None``.  ``None`` means the
    machine left the register unparseable, which the kernel absorbs.
    """

    classical = False

    def __init__(self, id: bytes):
        if not isinstance(id, bytes) or not id:
            raise ValueError("machine id must be a nonempty byte string")
        self.id = id

    def initial_state(self) -> dict:
        return {}

    def copy_state(self, state: dict) -> dict:
        return dict(state)

    def step(self, ctx: Context, state: dict, msg: ClassicalMessage, qreg) -> Out | None:
        raise NotImplementedError

    def send(self, recipient: bytes, payload: bytes, quantum: QubitRegister | None = None) -> Out:
        return Out(ClassicalMessage(self.id, recipient, payload), quantum)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.id!r})"


class Party(Machine):
    """Machine with an outbox, for programs that emit several messages.

    ``react`` returns a list of outputs to queue, or ``None`` when the message
    is not understood (absorbed, outbox untouched).  One queued message is
    released per activation.
    """

    def initial_state(self) -> dict:
        return {"outbox": ()}

    def react(self, ctx: Context, state: dict, msg: ClassicalMessage, qreg) -> list[Out] | None:
        raise NotImplementedError

    def step(self, ctx, state, msg, qreg):
        outs = self.react(ctx, state, msg, qreg)
        if outs is None:
            return None
        queue = state["outbox"] + tuple(outs)
        if not queue:
            return None
        state["outbox"] = queue[1:]
        return queue[0]


