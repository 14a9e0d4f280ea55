from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quclab.errors import BranchCapExceeded, IdCollision, UnknownParty
from quclab.netexec import (
    ADVERSARY,
    ENVIRONMENT,
    EPSILON,
    TIMEOUT,
    ClassicalMessage,
    CorruptionParty,
    DummyAdversary,
    ExactTree,
    ExecConfig,
    Machine,
    Network,
    Out,
    Protocol,
    Sample,
    classical_wrapper,
    compose,
    corrupt,
    exec_network,
    pack,
    run_trials,
    trace_lines,
    unpack,
    unrank_combination,
)
from quclab.qcore import Basis

EXACT = ExecConfig(mode=ExactTree())
payloads = st.binary(max_size=40)


class Script(Machine):
    """Environment following a fixed list of (recipient, payload); then outputs what it saw."""

    def __init__(self, plan, id=ENVIRONMENT):
        super().__init__(id)
        self.plan = plan

    def initial_state(self):
        return {"t": 0, "seen": ()}

    def step(self, ctx, state, msg, qreg):
        state["seen"] += (msg.encode(),)
        t = state["t"]
        state["t"] += 1
        if t < len(self.plan):
            return self.send(*self.plan[t])
        return self.send(EPSILON, pack(*state["seen"][1:]))


class Reply(Machine):
    """Answers every message with ``out`` (raw bytes or an Out)."""

    def __init__(self, id, out):
        super().__init__(id)
        self.out = out

    def step(self, ctx, state, msg, qreg):
        return self.out(self, msg) if callable(self.out) else self.out


class Coin(Machine):
    def step(self, ctx, state, msg, qreg):
        return self.send(ENVIRONMENT, b"%d" % ctx.coin())


class Echo(Machine):
    def step(self, ctx, state, msg, qreg):
        return self.send(msg.sender, msg.payload, qreg)


def _output(net, cfg=ExecConfig(mode=Sample(0), record_trace=True)):
    return exec_network(net, cfg)


@given(st.lists(payloads, max_size=6))
def test_pack_round_trip(fields):
    assert unpack(pack(*fields)) == tuple(fields)
    assert unpack(pack(*fields), len(fields)) == tuple(fields)


@given(st.binary(min_size=1, max_size=10), st.binary(min_size=1, max_size=10), payloads)
def test_message_round_trip(a, b, p):
    msg = ClassicalMessage(a, b, p)
    assert ClassicalMessage.parse(msg.encode()) == msg


def test_truncated_packing_is_rejected():
    assert unpack(pack(b"abc")[:-1]) is None
    assert unpack(pack(b"a", b"b"), 3) is None


def test_immediate_output_takes_one_activation():
    res = _output(Network([Script([])]))
    assert res.steps == 1
    assert unpack(res.output) == ()


def test_ping_pong_trace_order():
    env = Script([(ADVERSARY, b"ping")])
    net = Network([env, Echo(ADVERSARY)])
    res = _output(net)
    assert [(e.sender, e.recipient, e.payload) for e in res.trace[:2]] == [
        (ENVIRONMENT, ADVERSARY, b"ping"),
        (ADVERSARY, ENVIRONMENT, b"ping"),
    ]
    assert unpack(res.output) == (ClassicalMessage(ADVERSARY, ENVIRONMENT, b"ping").encode(),)


def test_well_formed_forwarding():
    a = Reply(b"A", lambda self, msg: self.send(ENVIRONMENT, b"got " + msg.payload))
    b = Reply(b"B", lambda self, msg: self.send(b"A", msg.payload))
    res = _output(Network([Script([(b"B", b"x")]), a, b]))
    assert res.trace[1][1:3] == (b"B", b"A")
    assert unpack(res.output)[0] == ClassicalMessage(b"A", ENVIRONMENT, b"got x").encode()


@pytest.mark.parametrize("reply, note", [
    (lambda self, msg: Out(ClassicalMessage(b"someone-else", ENVIRONMENT, b"x")), "sender-mismatch"),
    (lambda self, msg: Out(b"\x00garbage"), "unparseable"),
    (lambda self, msg: self.send(b"nobody", b"x"), "unknown-recipient"),
    (lambda self, msg: None, "absorbed"),
])
def test_malformed_output_reactivates_environment(reply, note):
    res = _output(Network([Script([(b"B", b"x")]), Reply(b"B", reply)]))
    assert res.trace[1].note == note
    assert unpack(res.output) == (ClassicalMessage(EPSILON, ENVIRONMENT, EPSILON).encode(),)


def test_exact_coin():
    dist = exec_network(Network([Script([(b"C", b"")]), Coin(b"C")]), EXACT)
    coin = {ClassicalMessage.parse(unpack(k)[0]).payload: p for k, p in dist.items()}
    assert coin == {b"0": Fraction(1, 2), b"1": Fraction(1, 2)}
    assert dist.total() == 1


def test_exact_measurement_branches():
    class Measure(Machine):
        def step(self, ctx, state, msg, qreg):
            reg = ctx.pool.encode_bb84(b"0", [Basis.PLUS])
            return self.send(ENVIRONMENT, ctx.measure(reg, [Basis.TIMES]))

    dist = exec_network(Network([Script([(b"M", b"")]), Measure(b"M")]), EXACT)
    assert sorted(dist.values()) == [Fraction(1, 2), Fraction(1, 2)]


def test_branch_cap():
    class ManyCoins(Machine):
        def step(self, ctx, state, msg, qreg):
            return self.send(ENVIRONMENT, ctx.random_bits(12))

    with pytest.raises(BranchCapExceeded):
        exec_network(Network([Script([(b"M", b"")]), ManyCoins(b"M")]), ExecConfig(mode=ExactTree(100)))


def test_timeout_is_recorded():
    loop = Network([Script([(ADVERSARY, b"x")] * 100), Echo(ADVERSARY)])
    res = exec_network(loop, ExecConfig(mode=Sample(0), max_steps=5))
    assert res.output is TIMEOUT and res.timed_out


def test_run_trials_matches_exact_law():
    net = Network([Script([(b"C", b""), (b"C", b"")]), Coin(b"C")])
    exact = exec_network(net, EXACT)
    counts = run_trials(net, ExecConfig(mode=Sample(3)), 4000, seed=3)
    assert set(counts) == set(exact)
    for k, p in exact.items():
        assert abs(counts[k] / 4000 - float(p)) < 0.04


def test_trace_lines_are_json():
    res = _output(Network([Script([(ADVERSARY, b"\x01")]), Echo(ADVERSARY)]))
    assert '"payload": "01"' in trace_lines(res.trace)[0]


def test_corruption_party_obeys_adversary():
    proto = Protocol([Echo(b"P")], parties=[b"P"])
    net = corrupt(proto, [b"P"]).network(
        Script([(ADVERSARY, ClassicalMessage(ADVERSARY, b"P", ClassicalMessage(b"P", ENVIRONMENT, b"hi").encode()).encode())]),
        DummyAdversary(),
    )
    assert isinstance(net[b"P"], CorruptionParty)
    res = _output(net)
    assert unpack(res.output)[0] == ClassicalMessage(b"P", ENVIRONMENT, b"hi").encode()
    with pytest.raises(UnknownParty):
        corrupt(proto, [b"Q"])


def test_network_validation():
    with pytest.raises(IdCollision):
        Network([Script([]), Echo(b"A"), Echo(b"A")])
    with pytest.raises(ValueError):
        Network([Echo(b"A")])
    with pytest.raises(ValueError):
        Echo(b"")


def test_classical_wrapper_decoheres_qubits():
    class Sender(Machine):
        def step(self, ctx, state, msg, qreg):
            reg = ctx.pool.encode_bb84(b"0", [Basis.TIMES])
            return self.send(b"R", b"", reg)

    class Reader(Machine):
        def step(self, ctx, state, msg, qreg):
            return self.send(ENVIRONMENT, ctx.measure(qreg, [Basis.TIMES]))

    env = Script([(b"S", b"")])
    plain = exec_network(Network([env, Sender(b"S"), Reader(b"R")]), EXACT)
    wrapped = exec_network(Network([env, classical_wrapper(Sender(b"S")), Reader(b"R")]), EXACT)
    assert list(plain.values()) == [1]
    assert sorted(wrapped.values()) == [Fraction(1, 2), Fraction(1, 2)]


def test_compose_routes_through_instances():
    class Caller(Machine):
        def step(self, ctx, state, msg, qreg):
            if msg.sender == ENVIRONMENT:
                return self.send(b"F", msg.payload)
            return self.send(ENVIRONMENT, b"back " + msg.payload)

    class Sub(Machine):
        def step(self, ctx, state, msg, qreg):
            return self.send(msg.sender, msg.payload.upper())

    sigma = Protocol([Caller(b"A"), Echo(b"F")], parties=[b"A"], hybrids=[b"F"], callers={b"A": b"S"})
    pi = Protocol([Sub(b"S")], parties=[b"S"])
    env = Script([(b"A", b"hey")])
    direct = _output(sigma.network(env))
    composed = _output(compose(sigma, pi).network(env))
    assert unpack(direct.output)[0].endswith(b"back hey")
    assert unpack(composed.output)[0].endswith(b"back HEY")


@given(st.integers(1, 8), st.data())
def test_unrank_combination_is_a_bijection(m, data):
    size = data.draw(st.integers(0, m))
    subsets = list(combinations(range(m), size))
    assert [unrank_combination(m, size, r) for r in range(len(subsets))] == subsets
