"""Universal composition: replace hybrid functionalities by protocol instances.

Instance ``i`` of the subprotocol gets its ids tagged ``<id>#<i>``.  For a
subprotocol party, messages from its calling party look like environment
input, and its environment output goes back to the caller.  The caller keeps
addressing the placeholder functionality id and never sees the tags.  The
adversary is shared and sees tagged ids.
"""

from __future__ import annotations

from quclab.errors import IdCollision
from quclab.netexec.machine import Machine, Out
from quclab.netexec.messages import ENVIRONMENT, ClassicalMessage
from quclab.netexec.network import Protocol


def tag(mid: bytes, instance: int) -> bytes:
    return mid + b"#" + str(instance).encode()


class _Delegating(Machine):
    def __init__(self, id: bytes, inner: Machine):
        super().__init__(id)
        self.inner = inner
        self.classical = inner.classical

    def initial_state(self):
        return self.inner.initial_state()

    def copy_state(self, state):
        return self.inner.copy_state(state)


def _as_message(out):
    if out is None:
        return None, None
    if not isinstance(out, Out):
        out = Out(out)
    cm = out.classical
    if not isinstance(cm, ClassicalMessage):
        cm = ClassicalMessage.parse(cm)
    return cm, out


class Tagged(_Delegating):
    """A subprotocol machine running under instance tag ``instance``."""

    def __init__(self, inner: Machine, instance: int, local_ids, caller: bytes | None):
        super().__init__(tag(inner.id, instance), inner)
        self.instance = instance
        self.to_tagged = {mid: tag(mid, instance) for mid in local_ids}
        self.from_tagged = {v: k for k, v in self.to_tagged.items()}
        self.caller = caller

    def step(self, ctx, state, msg, qreg):
        sender = msg.sender
        if self.caller is not None and sender == self.caller:
            sender = ENVIRONMENT
        else:
            sender = self.from_tagged.get(sender, sender)
        inner_msg = ClassicalMessage(sender, self.inner.id, msg.payload)
        cm, out = _as_message(self.inner.step(ctx, state, inner_msg, qreg))
        if cm is None or cm.sender != self.inner.id:
            return out
        rcpt = cm.recipient
        if rcpt == ENVIRONMENT and self.caller is not None:
            rcpt = self.caller
        else:
            rcpt = self.to_tagged.get(rcpt, rcpt)
        return Out(ClassicalMessage(self.id, rcpt, cm.payload), out.quantum)

    def __repr__(self) -> str:
        return f"Tagged({self.inner!r}, {self.instance})"


class Caller(_Delegating):
    """A calling-protocol party whose placeholder ids are rerouted."""

    def __init__(self, inner: Machine, routes: dict[bytes, bytes]):
        super().__init__(inner.id, inner)
        self.routes = dict(routes)
        self.back = {v: k for k, v in self.routes.items()}

    def step(self, ctx, state, msg, qreg):
        if msg.sender in self.back:
            msg = ClassicalMessage(self.back[msg.sender], msg.recipient, msg.payload)
        cm, out = _as_message(self.inner.step(ctx, state, msg, qreg))
        if cm is None or cm.recipient not in self.routes:
            return out
        return Out(ClassicalMessage(cm.sender, self.routes[cm.recipient], cm.payload), out.quantum)

    def __repr__(self) -> str:
        return f"Caller({self.inner!r})"


def compose(sigma: Protocol, pi: Protocol, instances: int = 1) -> Protocol:
    """``sigma^pi``: the first ``instances`` hybrids of ``sigma`` become copies of ``pi``."""
    if instances < 1:
        raise ValueError("need at least one instance")
    if instances > len(sigma.hybrids):
        raise ValueError(f"sigma declares only {len(sigma.hybrids)} hybrid slots")
    replaced = set(sigma.hybrids[:instances])
    callee_of = sigma.callers
    for callee in callee_of.values():
        if callee not in pi.parties:
            raise ValueError(f"{callee!r} is not a party of the subprotocol")
    caller_of = {callee: caller for caller, callee in callee_of.items()}
    local_ids = [m.id for m in pi.machines]

    machines: list[Machine] = []
    for m in sigma.machines:
        if m.id in replaced:
            continue
        if m.id in callee_of:
            routes = {sigma.hybrids[i]: tag(callee_of[m.id], i) for i in range(instances)}
            m = Caller(m, routes)
        machines.append(m)
    for i in range(instances):
        for m in pi.machines:
            machines.append(Tagged(m, i, local_ids, caller_of.get(m.id)))

    seen: set[bytes] = set()
    for m in machines:
        if m.id in seen:
            raise IdCollision(f"composition produces duplicate id {m.id!r}")
        seen.add(m.id)
    return Protocol(
        machines,
        sigma.parties,
        hybrids=sigma.hybrids[instances:],
        callers=sigma.callers,
        name=f"{sigma.name}^{pi.name}",
    )
