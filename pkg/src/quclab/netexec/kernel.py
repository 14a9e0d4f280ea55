"""The execution loop: one activation at a time, sampled or enumerated."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple

from quclab.errors import BranchCapExceeded
from quclab.netexec.distribution import TIMEOUT, OutcomeDistribution
from quclab.netexec.machine import Context, Machine, Out
from quclab.netexec.messages import EMPTY_REGISTER, ENVIRONMENT, EPSILON, ClassicalMessage
from quclab.netexec.network import Network
from quclab.qcore import DEFAULT_QUBIT_CAP, BranchRecorder, QubitPool, QubitRegister, SampleChooser

log = logging.getLogger(__name__)

DEFAULT_BRANCH_CAP = 10**6


@dataclass(frozen=True)
class Sample:
    seed: int | None = 0


@dataclass(frozen=True)
class ExactTree:
    branch_cap: int = DEFAULT_BRANCH_CAP


@dataclass(frozen=True)
class ExecConfig:
    k: int = 1
    z: bytes = b""
    max_steps: int = 100_000
    mode: Sample | ExactTree = field(default_factory=Sample)
    record_trace: bool = False
    qubit_cap: int = DEFAULT_QUBIT_CAP

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("security parameter k must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


class TraceEntry(NamedTuple):
    step: int
    sender: bytes
    recipient: bytes
    payload: bytes
    qsize: int
    note: str = ""

    def as_json(self) -> dict:
        return {
            "step": self.step,
            "sender": self.sender.decode(errors="backslashreplace"),
            "recipient": self.recipient.decode(errors="backslashreplace"),
            "payload": self.payload.hex(),
            "qsize": self.qsize,
            "note": self.note,
        }


@dataclass
class ExecResult:
    output: Any
    trace: list[TraceEntry] | None
    steps: int
    norm_error: float

    @property
    def timed_out(self) -> bool:
        return self.output is TIMEOUT


class Transition(NamedTuple):
    msg: ClassicalMessage
    qreg: QubitRegister | None
    note: str


def activate(machine: Machine, state: dict, ctx: Context, msg: ClassicalMessage,
             qreg: QubitRegister | None, known: Any) -> Transition:
    """Run one machine on the registers and validate what it leaves behind.

    Ill-formed output, a claimed sender other than ``machine``, or an unknown
    recipient resets the classical register to ``(eps, environment, eps)`` and
    empties the quantum register.  ``known`` answers ``id in known``.
    """
    out = machine.step(ctx, state, msg, qreg)
    if out is None:
        return Transition(EMPTY_REGISTER, None, "absorbed")
    if not isinstance(out, Out):
        out = Out(out)
    cm = out.classical
    if not isinstance(cm, ClassicalMessage):
        cm = ClassicalMessage.parse(cm)
        if cm is None:
            ctx.pool.release(out.quantum)
            return Transition(EMPTY_REGISTER, None, "unparseable")
    if cm.sender != machine.id:
        ctx.pool.release(out.quantum)
        return Transition(EMPTY_REGISTER, None, "sender-mismatch")
    if cm.recipient == EPSILON:
        if machine.id == ENVIRONMENT:
            return Transition(cm, out.quantum, "output")
        ctx.pool.release(out.quantum)
        return Transition(EMPTY_REGISTER, None, "epsilon-recipient")
    if cm.recipient not in known:
        ctx.pool.release(out.quantum)
        return Transition(EMPTY_REGISTER, None, "unknown-recipient")
    return Transition(cm, out.quantum, "")


class RunState:
    """Everything that changes during one execution."""

    __slots__ = ("msg", "qreg", "states", "pool", "steps", "output", "trace")

    def __init__(self, net: Network, cap: int = DEFAULT_QUBIT_CAP, trace: bool = False):
        self.msg = EMPTY_REGISTER
        self.qreg = None
        self.states = {m.id: m.initial_state() for m in net.machines}
        self.pool = QubitPool(cap)
        self.steps = 0
        self.output = None
        self.trace = [] if trace else None

    def fork(self, active: Machine) -> "RunState":
        new = RunState.__new__(RunState)
        new.msg = self.msg
        new.qreg = self.qreg
        new.states = dict(self.states)
        new.states[active.id] = active.copy_state(self.states[active.id])
        new.pool = self.pool.copy()
        new.steps = self.steps
        new.output = self.output
        new.trace = None if self.trace is None else list(self.trace)
        return new

    def fork_all(self, net: Network) -> "RunState":
        """Independent copy in which every machine may mutate its state."""
        new = self.fork(net.by_id[self.msg.recipient])
        new.states = {mid: net.by_id[mid].copy_state(st) for mid, st in self.states.items()}
        return new


def network_step(net: Network, rs: RunState, chooser, k: int = 1, z: bytes = b"",
                 ctx: Context | None = None) -> None:
    """Apply one activation to ``rs`` in place.

    ``ctx`` may be passed to reuse one context across steps; it must refer to
    ``rs.pool`` and ``chooser``.
    """
    machine = net.by_id[rs.msg.recipient]
    if ctx is None:
        ctx = Context(k, rs.pool, chooser, z)
    t = activate(machine, rs.states[machine.id], ctx, rs.msg, rs.qreg, net.by_id)
    rs.steps += 1
    if rs.trace is not None:
        shown = t.msg if t.note in ("", "output") else ClassicalMessage(machine.id, EPSILON, EPSILON)
        rs.trace.append(TraceEntry(rs.steps, shown.sender, shown.recipient, shown.payload,
                                   len(t.qreg) if t.qreg is not None else 0, t.note))
    if t.note == "output":
        rs.output = t.msg.payload
        rs.msg, rs.qreg = EMPTY_REGISTER, None
    else:
        rs.msg, rs.qreg = t.msg, t.qreg


def exec_network(net: Network, cfg: ExecConfig) -> ExecResult | OutcomeDistribution:
    if isinstance(cfg.mode, ExactTree):
        return _exec_exact(net, cfg)
    return _exec_sample(net, cfg, SampleChooser(cfg.mode.seed))


def run_once(net: Network, cfg: ExecConfig, chooser) -> ExecResult:
    return _exec_sample(net, cfg, chooser)


def _finish_sample(net: Network, cfg: ExecConfig, rs: RunState, chooser) -> ExecResult:
    ctx = Context(cfg.k, rs.pool, chooser, cfg.z)
    while rs.output is None and rs.steps < cfg.max_steps:
        network_step(net, rs, chooser, ctx=ctx)
    output = TIMEOUT if rs.output is None else rs.output
    return ExecResult(output, rs.trace, rs.steps, rs.pool.norm_error())


def _exec_sample(net: Network, cfg: ExecConfig, chooser) -> ExecResult:
    return _finish_sample(net, cfg, RunState(net, cfg.qubit_cap, cfg.record_trace), chooser)


class _ChoicePoint(Exception):
    pass


class _Probe:
    """Chooser that stops the run at the first genuine random choice."""

    def uniform(self, n):
        if n == 1:
            return 0
        raise _ChoicePoint

    def weighted(self, probs):
        viable = [i for i, p in enumerate(probs) if p > 1e-14]
        if len(viable) == 1:
            return viable[0]
        raise _ChoicePoint


def _advance(net: Network, cfg: ExecConfig, rs: RunState) -> RunState:
    """Run deterministic activations until the next one that makes a random choice."""
    probe = _Probe()
    while rs.output is None and rs.steps < cfg.max_steps:
        trial = rs.fork(net.by_id[rs.msg.recipient])
        try:
            network_step(net, trial, probe, cfg.k, cfg.z)
        except _ChoicePoint:
            break
        rs = trial
    return rs


def deterministic_prefix(net: Network, cfg: ExecConfig) -> RunState:
    """Run until the first activation that makes a random choice, and stop before it."""
    return _advance(net, cfg, RunState(net, cfg.qubit_cap, cfg.record_trace))


class _Tally:
    """Sampling chooser that remembers the genuine choices it made."""

    __slots__ = ("inner", "taken")

    def __init__(self, inner):
        self.inner = inner
        self.taken = []

    def uniform(self, n):
        value = self.inner.uniform(n)
        if n > 1:
            self.taken.append(value)
        return value

    def weighted(self, probs):
        value = self.inner.weighted(probs)
        self.taken.append(-1 - value)
        return value


class _Node:
    __slots__ = ("rs", "children", "visits")

    def __init__(self, rs: RunState):
        self.rs = rs
        self.children: dict = {}
        self.visits = 0

    @property
    def wild(self) -> bool:
        """Choices here rarely repeat (or have not been seen twice yet), so remembering them does not pay."""
        if self.visits < 2:
            return True
        return len(self.children) > _WILD_CHILDREN and 2 * len(self.children) > self.visits


_WILD_CHILDREN = 64


DEFAULT_MEMO_NODES = 20_000


def run_trials(net: Network, cfg: ExecConfig, trials: int, seed=0, records: list | None = None,
               memo_nodes: int = DEFAULT_MEMO_NODES) -> dict:
    """Sample ``trials`` independent executions; returns output counts.

    Stretches of the execution between random choices are deterministic, so
    they are computed once and remembered in a tree keyed by the choices
    made (up to ``memo_nodes`` stretches).  Each trial walks the tree,
    sampling only the activations that make choices; this is
    distributionally identical to running every trial from scratch.  Where
    choices hardly ever repeat, trials leave the tree and run directly.
    ``records``, if given, receives one :class:`ExecResult` per trial.
    """
    chooser = seed if hasattr(seed, "uniform") else SampleChooser(seed)
    root = _Node(deterministic_prefix(net, cfg))
    budget = [memo_nodes - 1]
    counts: dict = {}
    for _ in range(trials):
        res = _walk(net, cfg, root, chooser, budget)
        counts[res.output] = counts.get(res.output, 0) + 1
        if records is not None:
            records.append(res)
    return counts


def _walk(net: Network, cfg: ExecConfig, node: _Node, chooser, budget: list) -> ExecResult:
    """One sampled execution down the memo tree, growing it while ``budget`` lasts."""
    while True:
        rs = node.rs
        if rs.output is not None or rs.steps >= cfg.max_steps:
            output = TIMEOUT if rs.output is None else rs.output
            return ExecResult(output, rs.trace, rs.steps, rs.pool.norm_error())
        node.visits += 1
        tally = _Tally(chooser)
        child = rs.fork(net.by_id[rs.msg.recipient])
        network_step(net, child, tally, cfg.k, cfg.z)
        key = tuple(tally.taken)
        nxt = node.children.get(key)
        if nxt is None:
            if budget[0] <= 0 or node.wild:
                return _finish_sample(net, cfg, child.fork_all(net), chooser)
            budget[0] -= 1
            nxt = node.children[key] = _Node(_advance(net, cfg, child))
        node = nxt


def _exec_exact(net: Network, cfg: ExecConfig) -> OutcomeDistribution:
    """Depth-first enumeration of every random choice and measurement branch.

    Each activation runs on a forked run-state with a :class:`BranchRecorder`.
    When it hits choice points, the activation is replayed once per sibling
    prefix, each replay starting again from the pre-activation state.
    """
    cap = cfg.mode.branch_cap
    weights: dict = {}
    branches = 1
    worst_norm = 0.0
    # path probabilities are unreduced num/den pairs until they reach a leaf
    stack = [(RunState(net, cfg.qubit_cap), 1, 1)]
    while stack:
        rs, num, den = stack.pop()
        while rs.output is None and rs.steps < cfg.max_steps:
            machine = net.by_id[rs.msg.recipient]
            rec = BranchRecorder()
            trial = rs.fork(machine)
            network_step(net, trial, rec, cfg.k, cfg.z)
            if not rec.points:
                rs = trial
                continue
            children = [(trial, num * rec.num, den * rec.den)]
            pending = rec.sibling_prefixes()
            while pending:
                prefix = pending.pop()
                branches += 1
                if branches > cap:
                    raise BranchCapExceeded(
                        f"more than {cap} branches; reduce the protocol parameters or raise the cap"
                    )
                replay = BranchRecorder(prefix)
                child = rs.fork(machine)
                network_step(net, child, replay, cfg.k, cfg.z)
                pending.extend(replay.sibling_prefixes())
                children.append((child, num * replay.num, den * replay.den))
            rs, num, den = children[0]
            stack.extend(children[1:])
        outcome = TIMEOUT if rs.output is None else rs.output
        weights[outcome] = weights.get(outcome, Fraction(0)) + Fraction(num, den)
        worst_norm = max(worst_norm, rs.pool.norm_error())
    return OutcomeDistribution(weights, exact=True, branches=branches, max_norm_error=worst_norm)
