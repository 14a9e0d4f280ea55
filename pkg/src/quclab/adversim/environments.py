"""Environment machines that drive protocol runs."""

from __future__ import annotations

from typing import Callable, Sequence

from quclab.netexec import ENVIRONMENT, EPSILON, Machine, pack
from quclab.otproto.qrot import POKE, is_abort

Inputs = Sequence[tuple[bytes, bytes]]


class HonestDriver(Machine):
    """Deliver inputs in order, then poke parties until the outputs are in.

    ``inputs`` is a list of ``(party, payload)`` pairs, or a function of the
    context returning one (for random inputs).  The run ends once every
    party in ``expect`` has produced output, or any party aborts.  The
    environment's own output is ``finish(inputs, outputs)``; by default the
    packed inputs followed by the packed outputs in ``expect`` order.
    """

    def __init__(self, inputs: Inputs | Callable, expect: Sequence[bytes],
                 poke: Sequence[bytes] | None = None, max_pokes: int = 64,
                 finish: Callable | None = None, id: bytes = ENVIRONMENT):
        super().__init__(id)
        self.inputs = inputs
        self.expect = tuple(expect)
        self.poke = tuple(poke if poke is not None else expect)
        self.max_pokes = max_pokes
        self.finish = finish or default_finish

    def initial_state(self):
        return {"inputs": None, "next": 0, "outputs": (), "pokes": 0}

    def step(self, ctx, state, msg, qreg):
        if state["inputs"] is None:
            inputs = self.inputs(ctx) if callable(self.inputs) else self.inputs
            state["inputs"] = tuple(inputs)
        got = dict(state["outputs"])
        if msg.sender in self.expect and msg.sender not in got:
            state["outputs"] += ((msg.sender, msg.payload),)
            got[msg.sender] = msg.payload
        if state["next"] < len(state["inputs"]):
            party, payload = state["inputs"][state["next"]]
            state["next"] += 1
            return self.send(party, payload)
        aborted = any(is_abort(v) for v in got.values())
        if aborted or all(p in got for p in self.expect) or state["pokes"] >= self.max_pokes:
            out = self.finish(state["inputs"], state["outputs"])
            return self.send(EPSILON, out)
        target = self.poke[state["pokes"] % len(self.poke)]
        state["pokes"] += 1
        return self.send(target, POKE)


def default_finish(inputs, outputs) -> bytes:
    got = dict(outputs)
    return pack(
        pack(*(pack(p, v) for p, v in inputs)),
        pack(*(pack(p, got[p]) for p in sorted(got))),
    )
