from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from quclab.adversim import HonestDriver
from quclab.idealfunc import (
    ALICE,
    BOB,
    COMMITTED,
    F_ROT,
    OPEN,
    REJECT,
    FROT,
    commit_message,
    extract_commitment,
    f_and,
    f_com,
    f_com_equivocal,
    f_ot,
    f_rot,
    ideal_rot,
    trivial_commitment_protocol,
)
from quclab.netexec import (
    ENVIRONMENT,
    ClassicalMessage,
    Context,
    DummyAdversary,
    ExactTree,
    ExecConfig,
    exec_network,
    pack,
    unpack,
)
from quclab.qcore import BranchRecorder, QubitPool

bitstr = lambda n: st.text(alphabet="01", min_size=n, max_size=n).map(str.encode)  # noqa: E731


def drive(machine, messages, prefix=()):
    """Feed ``(sender, payload)`` pairs to ``machine``; collect (recipient, payload) or None."""
    ctx = Context(1, QubitPool(), BranchRecorder(prefix))
    state = machine.initial_state()
    outs = []
    for sender, payload in messages:
        out = machine.step(ctx, state, ClassicalMessage(sender, machine.id, payload), None)
        outs.append(None if out is None else (out.classical.recipient, out.classical.payload))
    return outs


def test_commitment_commit_then_open():
    outs = drive(f_com(1), [(BOB, commit_message(b"1")), (BOB, OPEN)])
    assert outs == [(ALICE, COMMITTED), (ALICE, pack(OPEN, b"1"))]


def test_commitment_is_binding_and_ignores_noise():
    outs = drive(f_com(1), [(BOB, OPEN), (ALICE, commit_message(b"0")), (BOB, commit_message(b"0")),
                            (BOB, commit_message(b"1")), (BOB, commit_message(b"11")), (BOB, OPEN), (BOB, OPEN)])
    assert outs == [None, None, (ALICE, COMMITTED), None, None, (ALICE, pack(OPEN, b"0")), None]


@given(bitstr(3))
def test_commitment_reveals_committed_value(x):
    assert drive(f_com(3), [(BOB, commit_message(x)), (BOB, OPEN)])[1] == (ALICE, pack(OPEN, x))


def test_equivocal_commitment_decides_late():
    for value in (b"0", b"1"):
        outs = drive(f_com_equivocal(1), [(BOB, b"commit"), (BOB, pack(OPEN, value))])
        assert outs == [(ALICE, COMMITTED), (ALICE, pack(OPEN, value))]
    assert drive(f_com_equivocal(1), [(BOB, b"commit"), (BOB, pack(OPEN, b"01"))])[1] is None


@given(bitstr(2), bitstr(2), st.integers(0, 1), st.booleans())
def test_ot_selects_in_either_order(s0, s1, c, c_first):
    msgs = [(ALICE, pack(s0, s1)), (BOB, b"%d" % c)]
    if c_first:
        msgs.reverse()
    outs = drive(f_ot(2), msgs)
    assert outs[0] is None
    assert outs[1] == (BOB, (s0, s1)[c])


def test_ot_examples():
    assert drive(f_ot(2), [(ALICE, pack(b"00", b"11")), (BOB, b"1")])[1] == (BOB, b"11")
    for c in (b"0", b"1"):
        assert drive(f_ot(2), [(ALICE, pack(b"01", b"01")), (BOB, c)])[1] == (BOB, b"01")


def test_rot_joint_law_is_uniform_on_consistent_triples():
    law = {}
    for prefix in [(a, b) for a in (0, 1) for b in (0, 1)]:
        outs = drive(f_rot(1), [(BOB, b"0"), (ALICE, b"")], prefix)
        (r1, s), (r2, pair) = outs
        assert (r1, r2) == (BOB, ALICE)
        s0, s1 = unpack(pair, 2)
        law[(s0, s1, s)] = law.get((s0, s1, s), 0) + Fraction(1, 4)
    assert law == {(a, b, a): Fraction(1, 4) for a in (b"0", b"1") for b in (b"0", b"1")}


def test_rot_with_corrupted_sender_is_ot():
    outs = drive(FROT(F_ROT, 1, a_corrupted=True), [(BOB, b"1"), (ALICE, pack(b"0", b"1"))])
    assert outs == [None, (BOB, b"1")]


def test_rot_network_exactly():
    env = HonestDriver([(BOB, b"1")], [ALICE, BOB])
    dist = exec_network(ideal_rot(1).network(env, DummyAdversary()), ExecConfig(mode=ExactTree()))
    assert len(dist) == 4 and set(dist.values()) == {Fraction(1, 4)}
    for outcome in dist:
        _, outputs = unpack(outcome, 2)
        pair, s = (unpack(o, 2)[1] for o in unpack(outputs))
        assert unpack(pair, 2)[1] == s


def test_and():
    for a in (0, 1):
        for b in (0, 1):
            outs = drive(f_and(), [(ALICE, b"%d" % a), (BOB, b"%d" % b), (ALICE, b"")])
            assert outs[1:] == [(ALICE, b"%d" % (a * b)), (BOB, b"%d" % (a * b))]


def test_trivial_commitment_extracts_and_rejects():
    proto = trivial_commitment_protocol()
    sender, receiver = proto.by_id[BOB], proto.by_id[ALICE]
    sent = drive(sender, [(ENVIRONMENT, commit_message(b"1")), (ENVIRONMENT, OPEN)])
    transcript = [ClassicalMessage(BOB, ALICE, p) for _, p in sent]
    assert extract_commitment(transcript) == b"1"
    assert drive(receiver, [(BOB, p) for _, p in sent]) == [(ENVIRONMENT, COMMITTED), (ENVIRONMENT, pack(OPEN, b"1"))]
    assert drive(receiver, [(BOB, commit_message(b"1")), (BOB, pack(OPEN, b"0"))])[1] == (ENVIRONMENT, REJECT)
