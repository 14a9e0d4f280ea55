"""Environments that play a corrupted Alice through the dummy adversary.

A script runs Alice's honest program privately and edits what she sends
according to a :class:`ScriptSpec`.  Every message goes out as an
instruction to the adversary, so the same script drives the real world
(dummy adversary, Alice's corruption party) and the ideal world (the
simulator).  The environment's output is everything it has seen, in order,
including empty activations; two worlds are indistinguishable for the
script exactly when these outputs are identically distributed.

Alice's coins (bits, bases, test set, hashes) come from the seeded tape of
:class:`~quclab.adversim.puppets.PuppetEnvironment`.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from importlib import resources

from quclab.errors import ConfigInvalid
from quclab.idealfunc import ALICE, BOB, COMMITTED, F_ROT, OPEN
from quclab.adversim.puppets import PuppetEnvironment, via
from quclab.netexec import ADVERSARY, ENVIRONMENT, pack, unpack
from quclab.otproto import ABORT, NEXT, AliceQROT, ProtocolParams, commitment_ids
from quclab.otproto.qrot import QUBITS, TAG_FM, TAG_T, TAG_THETA
from quclab.qcore import bases_from_bits

_OPTIONS = {
    "c": ("0", "1", "random"),
    "source": ("bb84", "epr"),
    "bases": ("random", "plus", "times"),
    "announce": ("honest", "lie", "plus"),
    "abort": ("", "after-commit", "after-open"),
    "hash": ("honest", "zero"),
}


@dataclass(frozen=True)
class ScriptSpec:
    name: str
    c: str = "0"
    source: str = "bb84"
    bases: str = "random"
    announce: str = "honest"
    abort: str = ""
    hash: str = "honest"
    early_fm: bool = False
    flip: bool = False
    junk: int = 0
    seed: int = 0
    description: str = field(default="", compare=False)

    def __post_init__(self):
        for key, allowed in _OPTIONS.items():
            if getattr(self, key) not in allowed:
                raise ConfigInvalid(f"script {self.name!r}: {key} must be one of {allowed}")
        if self.junk < 0:
            raise ConfigInvalid(f"script {self.name!r}: junk must be nonnegative")

    @classmethod
    def from_dict(cls, data: dict) -> "ScriptSpec":
        known = set(cls.__dataclass_fields__)
        stray = set(data) - known
        if stray or "name" not in data:
            raise ConfigInvalid(f"bad script entry {data!r}")
        return cls(**data)

    def as_dict(self) -> dict:
        return asdict(self)


def load_corpus(path=None) -> list[ScriptSpec]:
    """The named scripts from a JSON list (the bundled corpus by default)."""
    if path is None:
        text = resources.files("quclab.adversim").joinpath("corpus.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    try:
        entries = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"corpus is not valid JSON: {exc}") from None
    specs = [ScriptSpec.from_dict(e) for e in entries]
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ConfigInvalid("duplicate script names in corpus")
    return specs


class ScriptedAlice(AliceQROT):
    """Alice's program with the preparation changed as the script says."""

    def __init__(self, params: ProtocolParams, spec: ScriptSpec):
        super().__init__(params, "rot", "fcom", record_view=False, source=spec.source)
        self.spec = spec
        self.forced = {"plus": 0, "times": 1}.get(spec.bases)

    def _prepare(self, ctx, state):
        m = self.p.m
        if self.forced is not None:
            state["tht"] = (self.forced,) * m
        if self.source == "epr":
            return super()._prepare(ctx, state)
        xt = ctx.random_bits(m)
        tht = ctx.random_bits(m) if self.forced is None else b"01"[self.forced:self.forced + 1] * m
        state["xt"] = tuple(b - 48 for b in xt)
        state["tht"] = tuple(b - 48 for b in tht)
        if self.spec.flip:
            xt = bytes([xt[0] ^ 1]) + xt[1:]
        return ctx.pool.encode_bb84(xt, bases_from_bits(tht))


def junk_schedule(spec: ScriptSpec, params: ProtocolParams) -> dict:
    rng = random.Random(spec.seed)
    labels = commitment_ids(params.m)
    menu = [
        lambda: (BOB, rng.choice([b"0", b"1", b"2"])),
        lambda: (ENVIRONMENT, b"nobody"),
        lambda: (ADVERSARY, rng.randbytes(rng.randint(0, 6))),
        lambda: (ALICE, rng.randbytes(3)),
        lambda: (ADVERSARY, via(ALICE, BOB, rng.choice([
            NEXT, rng.randbytes(4), pack(TAG_T, b"1" * params.test_size + b"0" * params.n),
            pack(TAG_THETA, b"0" * params.n), pack(QUBITS, str(params.m).encode()),
        ]))),
        lambda: (ADVERSARY, via(ALICE, rng.choice(labels), rng.choice([COMMITTED, pack(OPEN, b"0")]))),
        lambda: (ADVERSARY, via(ALICE, F_ROT, pack(b"0" * params.ell, b"1" * params.ell))),
        lambda: (ADVERSARY, via(BOB, ALICE, NEXT)),
    ]
    events = {}
    for _ in range(spec.junk):
        at = rng.randint(1, 40)
        events.setdefault(at, []).append(rng.choice(menu)())
    return {k: tuple(v) for k, v in events.items()}


def _zero_hash(f_enc: bytes) -> bytes:
    fields = unpack(f_enc, 2)
    return pack(fields[0], b"0" * len(fields[1])) if fields else f_enc


class AliceScript(PuppetEnvironment):
    """Environment playing corrupted Alice according to ``spec``."""

    def __init__(self, params: ProtocolParams, spec: ScriptSpec, id: bytes = ENVIRONMENT):
        c = (lambda ctx: b"%d" % ctx.coin()) if spec.c == "random" else spec.c.encode()
        super().__init__([ScriptedAlice(params, spec)], [(BOB, c), (ALICE, b"start")],
                         seed=spec.seed, junk=junk_schedule(spec, params), id=id)
        self.p = params
        self.spec = spec
        self.alice = self.puppets[ALICE]

    def on_output(self, state, party, payload):
        super().on_output(state, party, payload)
        if payload == ABORT:
            state["stopped"] = True

    def edit(self, state, party, outs):
        spec = self.spec
        edited = []
        for out in outs:
            cm = out.classical
            fields = unpack(cm.payload) if cm.recipient == BOB else None
            tag = fields[0] if fields else None
            if (tag == TAG_T and spec.abort == "after-commit") or (tag == TAG_THETA and spec.abort == "after-open"):
                edited.append(self.alice.send(ENVIRONMENT, ABORT))
                break
            if tag == TAG_THETA and spec.announce != "honest":
                bases = fields[1]
                bases = bytes(b ^ 1 for b in bases) if spec.announce == "lie" else b"0" * len(bases)
                out = self.alice.send(BOB, pack(TAG_THETA, bases))
            if tag == TAG_FM and spec.hash == "zero":
                fields = (fields[0], _zero_hash(fields[1]), _zero_hash(fields[2])) + fields[3:]
                out = self.alice.send(BOB, pack(*fields))
            edited.append(out)
            if tag == TAG_T and spec.early_fm:
                f = pack(str(self.p.n).encode(), b"1" * (self.p.n + self.p.ell - 1))
                zero = b"0" * self.p.ell
                edited.append(self.alice.send(BOB, pack(TAG_FM, f, f, zero, zero)))
        return edited


def alice_script(params: ProtocolParams, spec: ScriptSpec | dict) -> AliceScript:
    if isinstance(spec, dict):
        spec = ScriptSpec.from_dict(spec)
    return AliceScript(params, spec)


__all__ = ["AliceScript", "ScriptSpec", "ScriptedAlice", "alice_script", "junk_schedule", "load_corpus"]
