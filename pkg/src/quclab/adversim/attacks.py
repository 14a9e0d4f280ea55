"""Cheating-Bob strategies, run by the environment through Bob's corruption party.

Each strategy is a complete program for Bob.  The attack environment starts
honest Alice, plays Bob's program via the dummy adversary and outputs
``(verdict, bob_outputs, alice_output)``.  The verdict is ``pass`` once Alice
announces her bases (she accepted the test) and ``abort`` if she aborts.
"""

from __future__ import annotations

from dataclasses import dataclass

from quclab.adversim.puppets import PuppetEnvironment
from quclab.bitstrings import restrict, to_mask, xor_bits
from quclab.idealfunc import ALICE, BOB, commit_message
from quclab.netexec import ENVIRONMENT, DummyAdversary, Network, corrupt, pack, unpack
from quclab.otproto import POKE, BobQROT, ProtocolParams, is_abort, pi_qrot
from quclab.otproto.hashing import hash_eval
from quclab.otproto.qrot import TAG_THETA, theta_label, x_label
from quclab.qcore import bases_from_bits

PASS = b"pass"
ABORTED = b"abort"
STUCK = b"stuck"

KINDS = ("honest", "no-measure-random-commit", "store-and-guess", "wrong-basis-all")


@dataclass(frozen=True)
class BobStrategy:
    """Which program corrupted Bob runs.

    ``c`` is the choice bit (``honest`` and ``wrong-basis-all``); ``rule``
    picks the guessed bases of ``store-and-guess`` (``plus``, ``times`` or
    ``alternate``); ``basis`` is the fixed basis of ``wrong-basis-all``.
    ``commit``, when given, fixes the ``2m`` committed bits of
    ``no-measure-random-commit`` (bases then values).
    """

    kind: str
    c: int = 0
    rule: str = "plus"
    basis: str = "+"
    commit: bytes | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown strategy {self.kind!r}; choose from {KINDS}")
        if self.c not in (0, 1):
            raise ValueError("choice bit must be 0 or 1")

    @classmethod
    def honest(cls, c: int) -> "BobStrategy":
        return cls("honest", c=c)

    @classmethod
    def no_measure_random_commit(cls, commit: bytes | None = None) -> "BobStrategy":
        return cls("no-measure-random-commit", commit=commit)

    @classmethod
    def store_and_guess(cls, rule: str = "plus") -> "BobStrategy":
        return cls("store-and-guess", rule=rule)

    @classmethod
    def wrong_basis_all(cls, basis: str = "+", c: int = 0) -> "BobStrategy":
        return cls("wrong-basis-all", basis=basis, c=c)


class StoringBob(BobQROT):
    """Keeps every qubit, commits to guesses, measures in Alice's bases later.

    After Alice announces her bases Bob knows the whole of ``x`` on the
    retained positions, so he learns both strings.  His output is
    ``(s0, s1)``.
    """

    def __init__(self, params: ProtocolParams, guess):
        super().__init__(params, "rot", "fcom")
        self.guess = guess

    def initial_state(self):
        state = super().initial_state()
        state["c"] = 0
        return state

    def _receive_qubits(self, ctx, state, qreg):
        state["held"] = qreg
        tht, xt = self.guess(ctx, self.p.m)
        state["tht"], state["xt"] = tht, xt
        commits = []
        for i in range(self.p.m):
            commits.append((theta_label(i + 1), commit_message(tht[i:i + 1])))
            commits.append((x_label(i + 1), commit_message(xt[i:i + 1])))
        return commits

    def _partition(self, ctx, state):
        retained = state["held"].select(state["retained"])
        state["x_b"] = ctx.measure(retained, bases_from_bits(state["theta_a"]))
        ctx.pool.release(state["held"])
        n = self.p.n
        half = n // 2
        return to_mask(range(half), n), to_mask(range(half, n), n)

    def _finish(self, ctx, state, fs, ms, ts):
        s = tuple(
            xor_bits(ms[i], hash_eval(fs[i], restrict(state["x_b"], state["parts"][i]))) for i in (0, 1)
        )
        return [self.send(ENVIRONMENT, pack(*s))]


class PresetBob(BobQROT):
    """Honest Bob whose choice bit is part of the program."""

    def __init__(self, params: ProtocolParams, c: int):
        super().__init__(params, "rot", "fcom")
        self.c = c

    def initial_state(self):
        state = super().initial_state()
        state["c"] = self.c
        return state


class FixedBasisBob(PresetBob):
    """Measures every qubit in one basis and otherwise follows the protocol."""

    def __init__(self, params: ProtocolParams, basis: str, c: int):
        super().__init__(params, c)
        self.basis_bit = b"1" if basis in ("x", "×", "1") else b"0"

    def _receive_qubits(self, ctx, state, qreg):
        tht = self.basis_bit * self.p.m
        xt = ctx.measure(qreg, bases_from_bits(tht))
        ctx.pool.release(qreg)
        state["tht"], state["xt"] = tht, xt
        commits = []
        for i in range(self.p.m):
            commits.append((theta_label(i + 1), commit_message(tht[i:i + 1])))
            commits.append((x_label(i + 1), commit_message(xt[i:i + 1])))
        return commits

    def _finish(self, ctx, state, fs, ms, ts):
        out = super()._finish(ctx, state, fs, ms, ts)
        return out + [self.send(ENVIRONMENT, pack(b"measured", state["xt"]))]


def _random_guess(ctx, m):
    return ctx.random_bits(m), ctx.random_bits(m)


def _fixed_guess(bits: bytes):
    def guess(ctx, m):
        if len(bits) != 2 * m:
            raise ValueError(f"fixed commitment needs {2 * m} bits")
        return bits[:m], bits[m:]
    return guess


def _rule_guess(rule: str):
    def guess(ctx, m):
        if rule == "plus":
            tht = b"0" * m
        elif rule == "times":
            tht = b"1" * m
        elif rule == "alternate":
            tht = bytes(48 + (i & 1) for i in range(m))
        else:
            raise ValueError(f"unknown guess rule {rule!r}")
        return tht, b"0" * m
    return guess


def bob_program(strategy: BobStrategy, params: ProtocolParams) -> BobQROT:
    if strategy.kind == "honest":
        return PresetBob(params, strategy.c)
    if strategy.kind == "no-measure-random-commit":
        guess = _random_guess if strategy.commit is None else _fixed_guess(strategy.commit)
        return StoringBob(params, guess)
    if strategy.kind == "store-and-guess":
        return StoringBob(params, _rule_guess(strategy.rule))
    return FixedBasisBob(params, strategy.basis, strategy.c)


class AttackEnvironment(PuppetEnvironment):
    """Start Alice, run Bob's strategy, report Alice's verdict.

    With ``stop_at_theta`` the run ends as soon as Alice announces her bases.
    Otherwise it runs to the end and waits (poking Alice) for her output.
    """

    def __init__(self, params: ProtocolParams, strategy: BobStrategy, seed: int | None = None,
                 stop_at_theta: bool = False, max_pokes: int = 4):
        super().__init__([bob_program(strategy, params)], [(ALICE, b"start")], seed=seed)
        self.strategy = strategy
        self.stop_at_theta = stop_at_theta
        self.max_pokes = max_pokes

    def initial_state(self):
        state = super().initial_state()
        state.update(verdict=STUCK, alice=None, bob=(), pokes=0)
        return state

    def on_receive(self, state, msg, qreg):
        if msg.sender == ALICE and state["alice"] is None:
            state["alice"] = msg.payload
            if is_abort(msg.payload):
                state["verdict"] = ABORTED
                state["stopped"] = True

    def on_output(self, state, party, payload):
        state["bob"] += (payload,)

    def observe(self, state, party, msg):
        if msg.sender == ALICE and state["verdict"] == STUCK:
            fields = unpack(msg.payload)
            if fields and fields[0] == TAG_THETA:
                state["verdict"] = PASS
                if self.stop_at_theta:
                    state["stopped"] = True

    def before_finish(self, state):
        if state["stopped"] or state["alice"] is not None or state["pokes"] >= self.max_pokes:
            return None
        if state["verdict"] != PASS:
            return None
        state["pokes"] += 1
        return ALICE, POKE

    def finish(self, state):
        return pack(state["verdict"], pack(*state["bob"]), state["alice"] or b"")


def attack_world(params: ProtocolParams, strategy: BobStrategy, seed: int | None = None,
                 stop_at_theta: bool = False, alice_source: str = "bb84",
                 record_view: bool = False) -> Network:
    """Real world with Bob corrupted and the attack environment in charge."""
    proto = pi_qrot(params, record_view=record_view, source=alice_source)
    env = AttackEnvironment(params, strategy, seed=seed, stop_at_theta=stop_at_theta)
    return corrupt(proto, [BOB]).network(env, DummyAdversary())


def attack_bob(strategy: BobStrategy, params: ProtocolParams, **options) -> Network:
    return attack_world(params, strategy, **options)


def verdict(outcome: bytes) -> bytes:
    fields = unpack(outcome, 3)
    return fields[0] if fields else STUCK


__all__ = [
    "ABORTED", "AttackEnvironment", "BobStrategy", "FixedBasisBob", "KINDS", "PASS", "PresetBob",
    "STUCK", "StoringBob", "attack_bob", "attack_world", "bob_program", "verdict",
]
