"""Networks (runnable sets of machines) and protocol blueprints."""

from __future__ import annotations

from typing import Iterable

from quclab.errors import IdCollision, UnknownParty
from quclab.netexec.machine import Machine
from quclab.netexec.messages import ADVERSARY, ENVIRONMENT


def _index(machines: Iterable[Machine]) -> dict[bytes, Machine]:
    by_id: dict[bytes, Machine] = {}
    for m in machines:
        if m.id in by_id:
            raise IdCollision(f"duplicate machine id {m.id!r}")
        by_id[m.id] = m
    return by_id


class Protocol:
    """Protocol machines without environment or adversary.

    ``parties`` are the ids that may be corrupted.  ``hybrids`` lists
    placeholder functionality ids that :func:`compose` may replace by
    subprotocol instances; ``callers`` maps a calling party to the party of
    the subprotocol it talks to.
    """

    def __init__(
        self,
        machines: Iterable[Machine],
        parties: Iterable[bytes],
        hybrids: Iterable[bytes] = (),
        callers: dict[bytes, bytes] | None = None,
        name: str = "",
    ):
        self.machines = tuple(machines)
        self.by_id = _index(self.machines)
        self.parties = frozenset(parties)
        self.hybrids = tuple(hybrids)
        self.callers = dict(callers or {})
        self.name = name
        for reserved in (ENVIRONMENT, ADVERSARY):
            if reserved in self.by_id:
                raise IdCollision(f"protocol may not define {reserved!r}")
        missing = self.parties - set(self.by_id)
        if missing:
            raise UnknownParty(f"parties {sorted(missing)} are not machines of the protocol")

    def replace(self, *machines: Machine) -> "Protocol":
        new = {m.id: m for m in machines}
        unknown = set(new) - set(self.by_id)
        if unknown:
            raise UnknownParty(f"cannot replace unknown machines {sorted(unknown)}")
        return Protocol(
            (new.get(m.id, m) for m in self.machines),
            self.parties,
            self.hybrids,
            self.callers,
            self.name,
        )

    def network(self, environment: Machine, adversary: Machine | None = None) -> "Network":
        machines = [environment, *self.machines]
        if adversary is not None:
            machines.insert(1, adversary)
        return Network(machines, self.parties)

    def __repr__(self) -> str:
        ids = ", ".join(m.id.decode(errors="replace") for m in self.machines)
        return f"Protocol({self.name or '?'}: {ids})"


class Network:
    """A set of machines with distinct ids, including the environment."""

    def __init__(self, machines: Iterable[Machine], parties: Iterable[bytes] = ()):
        self.machines = tuple(machines)
        self.by_id = _index(self.machines)
        self.parties = frozenset(parties)
        if ENVIRONMENT not in self.by_id:
            raise ValueError("a network needs an environment machine")
        missing = self.parties - set(self.by_id)
        if missing:
            raise UnknownParty(f"parties {sorted(missing)} are not machines of the network")

    def __contains__(self, mid: bytes) -> bool:
        return mid in self.by_id

    def __getitem__(self, mid: bytes) -> Machine:
        return self.by_id[mid]

    def replace(self, *machines: Machine) -> "Network":
        new = {m.id: m for m in machines}
        unknown = set(new) - set(self.by_id)
        if unknown:
            raise UnknownParty(f"cannot replace unknown machines {sorted(unknown)}")
        return Network((new.get(m.id, m) for m in self.machines), self.parties)

    def ids(self) -> tuple[bytes, ...]:
        return tuple(self.by_id)
