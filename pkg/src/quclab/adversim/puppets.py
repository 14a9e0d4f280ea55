"""Environments that run corrupted parties' programs through the dummy adversary.

The environment keeps private copies of programs ("puppets") for the
corrupted parties.  Whatever a puppet wants to send leaves as an instruction
to the adversary; whatever the adversary reports about a corrupted party's
incoming traffic is handed to that party's puppet.  Puppets draw their coins
from a tape fixed by the seed, so a puppet environment is a deterministic
decision list; measurements stay genuine.  With ``seed=None`` puppets use
the execution's own coins instead.
"""

from __future__ import annotations

import random
from typing import Callable, Iterable, Sequence

from quclab.netexec import ADVERSARY, ENVIRONMENT, EPSILON, ClassicalMessage, Context, Machine, Party, pack

TAPE_LEN = 512


class TapeChooser:
    """Uniform choices from a fixed tape; weighted ones go to ``inner``."""

    __slots__ = ("tape", "pos", "inner")

    def __init__(self, tape, pos, inner):
        self.tape, self.pos, self.inner = tape, pos, inner

    def uniform(self, n):
        value = self.tape[self.pos % len(self.tape)] % n
        self.pos += 1
        return value

    def weighted(self, probs):
        return self.inner.weighted(probs)


def via(party: bytes, recipient: bytes, payload: bytes) -> bytes:
    """Adversary instruction: have ``party`` send ``payload`` to ``recipient``."""
    return ClassicalMessage(ADVERSARY, party, ClassicalMessage(party, recipient, payload).encode()).encode()


def make_tape(seed: int) -> tuple[int, ...]:
    rng = random.Random(seed)
    return tuple(rng.getrandbits(64) for _ in range(TAPE_LEN))


Action = tuple[bytes, "bytes | Callable"]


class PuppetEnvironment(Machine):
    """Environment driving ``puppets`` (programs of corrupted parties).

    ``actions`` run one per activation at the start: ``(target, payload)``
    either feeds the payload to the puppet ``target`` as environment input,
    or sends it straight to ``target``.  ``payload`` may be a function of
    the context (for environment coins).  ``junk`` maps activation numbers
    to extra messages sent before anything else.  When there is nothing
    left to send, the run ends with :meth:`finish`.
    """

    def __init__(self, puppets: Iterable[Party], actions: Sequence[Action] = (), seed: int | None = 0,
                 junk: dict | None = None, id: bytes = ENVIRONMENT):
        super().__init__(id)
        self.puppets = {p.id: p for p in puppets}
        self.actions = tuple(actions)
        self.tape = None if seed is None else make_tape(seed)
        self.junk = dict(junk or {})

    def initial_state(self):
        return {"t": 0, "puppets": {pid: p.initial_state() for pid, p in self.puppets.items()},
                "draws": 0, "queue": (), "seen": (), "stopped": False}

    def copy_state(self, state):
        new = dict(state)
        new["puppets"] = {pid: self.puppets[pid].copy_state(st) for pid, st in state["puppets"].items()}
        return new

    # -- hooks --------------------------------------------------------------

    def edit(self, state, party: bytes, outs: list) -> list:
        """Change what a puppet is about to send."""
        return outs

    def observe(self, state, party: bytes, msg: ClassicalMessage) -> None:
        """Look at a message about to reach a puppet; may set ``stopped``."""

    def on_output(self, state, party: bytes, payload: bytes) -> None:
        """A puppet produced local output."""
        state["seen"] += (pack(b"out", party, payload),)

    def on_receive(self, state, msg: ClassicalMessage, qreg) -> None:
        """Every activation starts here."""
        state["seen"] += (pack(msg.sender, msg.payload, b"%d" % (len(qreg) if qreg else 0)),)

    def finish(self, state) -> bytes:
        return pack(*state["seen"])

    # -- machinery ----------------------------------------------------------

    def run_puppet(self, ctx, state, party, msg, qreg):
        if self.tape is None:
            outs = self.puppets[party].react(ctx, state["puppets"][party], msg, qreg)
            return tuple(self.edit(state, party, list(outs or [])))
        chooser = TapeChooser(self.tape, state["draws"], ctx.chooser)
        pctx = Context(ctx.k, ctx.pool, chooser, ctx.z)
        outs = self.puppets[party].react(pctx, state["puppets"][party], msg, qreg)
        state["draws"] = chooser.pos
        return tuple(self.edit(state, party, list(outs or [])))

    def decode(self, msg):
        """``(party, message)`` for an adversary report of a corrupted party's input."""
        outer = ClassicalMessage.parse(msg.payload)
        if outer is None or outer.sender not in self.puppets or outer.recipient != ADVERSARY:
            return None
        inner = ClassicalMessage.parse(outer.payload)
        if inner is None or inner.recipient != outer.sender or inner.sender == ENVIRONMENT:
            return None
        return outer.sender, inner

    def step(self, ctx, state, msg, qreg):
        t = state["t"]
        state["t"] = t + 1
        self.on_receive(state, msg, qreg)
        if msg.sender == ADVERSARY and not state["stopped"]:
            decoded = self.decode(msg)
            if decoded is not None:
                party, inner = decoded
                self.observe(state, party, inner)
                if not state["stopped"]:
                    state["queue"] += self.run_puppet(ctx, state, party, inner, qreg)
                    qreg = None
        if qreg is not None:
            ctx.pool.release(qreg)
        if t < len(self.actions) and not state["stopped"]:
            target, payload = self.actions[t]
            if callable(payload):
                payload = payload(ctx)
            state["seen"] += (pack(b"act", target, payload),)
            if target in self.puppets:
                start = ClassicalMessage(ENVIRONMENT, target, payload)
                state["queue"] += self.run_puppet(ctx, state, target, start, None)
            else:
                return self.send(target, payload)
        for recipient, payload in self.junk.get(t, ()):
            return self.send(recipient, payload)
        while state["queue"] and not state["stopped"]:
            out, state["queue"] = state["queue"][0], state["queue"][1:]
            cm = out.classical
            if cm.recipient == ENVIRONMENT:
                self.on_output(state, cm.sender, cm.payload)
                continue
            return self.send(ADVERSARY, via(cm.sender, cm.recipient, cm.payload), out.quantum)
        if t < len(self.actions) - 1 and not state["stopped"]:
            return self.send(ENVIRONMENT, b"")
        extra = self.before_finish(state)
        if extra is not None:
            return self.send(*extra)
        return self.send(EPSILON, self.finish(state))

    def before_finish(self, state):
        """A last ``(recipient, payload)`` to send before ending, or ``None``."""
        return None
