import itertools
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from quclab.adversim import ABORTED, AttackEnvironment, BobStrategy, HonestDriver, verdict
from quclab.adversim.attacks import PresetBob
from quclab.bitstrings import to_mask
from quclab.errors import LengthMismatch, ParamsInvalid
from quclab.idealfunc import ALICE, BOB
from quclab.netexec import DummyAdversary, ExactTree, ExecConfig, Sample, corrupt, exec_network, pack, unpack
from quclab.otproto import (
    EXACT_PARAMS,
    SAMPLE_PARAMS,
    HashFunction,
    ProtocolParams,
    alice_qrot,
    bob_qrot,
    commitment_ids,
    hash_eval,
    hash_eval_batch,
    hash_sample,
    is_abort,
    pi_qot,
    pi_qrot,
    pi_qrot_com,
)

EXACT = ExecConfig(mode=ExactTree())
SMALL = ProtocolParams(1, 2, 1)


def bit_vectors(n):
    return st.lists(st.integers(0, 1), min_size=n, max_size=n).map(lambda v: bytes(48 + b for b in v))


# -- parameters -----------------------------------------------------------------


def test_params_validation():
    with pytest.raises(ParamsInvalid):
        ProtocolParams(3, 3, 1)
    with pytest.raises(ParamsInvalid):
        ProtocolParams(2, 3, 0)
    with pytest.raises(ParamsInvalid):
        ProtocolParams(8, 12, 1, alpha=0.5)
    with pytest.raises(ParamsInvalid):
        ProtocolParams.from_security(0)


def test_security_profile():
    p = ProtocolParams.from_security(2)
    assert (p.n, p.m, p.ell) == (8, 16, 1)
    assert p.test_size == 8
    assert p.in_theorem_regime
    assert not EXACT_PARAMS.in_theorem_regime and not SAMPLE_PARAMS.in_theorem_regime
    assert (EXACT_PARAMS.n, EXACT_PARAMS.m, EXACT_PARAMS.ell) == (2, 3, 1)
    assert (SAMPLE_PARAMS.n, SAMPLE_PARAMS.m, SAMPLE_PARAMS.ell) == (8, 12, 2)


# -- hashing ------------------------------------------------------------------------


def scipy_matrix(f: HashFunction) -> np.ndarray:
    """Independent construction: first column d[L-1:], first row d[L-1::-1]."""
    d = np.array([b - 48 for b in f.diagonals])
    L = f.input_len
    return scipy.linalg.toeplitz(d[L - 1:L - 1 + f.ell], d[L - 1::-1])


@given(st.integers(1, 8), st.integers(1, 4), st.data())
def test_hash_matches_scipy_toeplitz(L, ell, data):
    f = HashFunction(data.draw(bit_vectors(L + ell - 1)), L, ell)
    x = data.draw(bit_vectors(L))
    xs = np.array([b - 48 for b in x])
    expected = bytes(48 + int(b) for b in scipy_matrix(f) @ xs % 2)
    assert hash_eval(f, x) == expected
    assert np.array_equal(f.matrix(), scipy_matrix(f))
    batch = hash_eval_batch(np.array([[b - 48 for b in f.diagonals]]), xs, ell)
    assert bytes(48 + int(b) for b in batch[0]) == expected


@given(st.integers(1, 5), st.integers(1, 3), st.data())
def test_toeplitz_family_collides_with_probability_two_to_minus_ell(L, ell, data):
    x = data.draw(bit_vectors(L))
    y = data.draw(bit_vectors(L).filter(lambda v: v != x))
    hits = 0
    for d in itertools.product(b"01", repeat=L + ell - 1):
        f = HashFunction(bytes(d), L, ell)
        hits += hash_eval(f, x) == hash_eval(f, y)
    assert Fraction(hits, 2 ** (L + ell - 1)) == Fraction(1, 2 ** ell)


def test_hash_encoding_and_errors():
    f = hash_sample(3, 2, np.random.default_rng(1))
    assert HashFunction.decode(f.encode(), 2) == f
    assert HashFunction.decode(b"junk", 2) is None
    with pytest.raises(LengthMismatch):
        HashFunction(b"01", 3, 2)
    with pytest.raises(LengthMismatch):
        hash_eval(f, b"0000")
    assert hash_eval(f, b"1") == hash_eval(f, b"100")


# -- honest runs -----------------------------------------------------------------


def rot_outputs(dist):
    """Law of ((s0, s1), s) from default driver outputs."""
    law = {}
    for outcome, p in dist.items():
        _, outputs = unpack(outcome, 2)
        a, b = (unpack(o, 2)[1] for o in unpack(outputs))
        key = (unpack(a, 2), b)
        law[key] = law.get(key, 0) + p
    return law


@pytest.mark.parametrize("c", [0, 1])
def test_honest_rot_is_correct_and_uniform(c):
    env = HonestDriver([(BOB, b"%d" % c), (ALICE, b"start")], [ALICE, BOB])
    law = rot_outputs(exec_network(pi_qrot(SMALL).network(env, DummyAdversary()), EXACT))
    assert law == {((s0, s1), (s0, s1)[c]): Fraction(1, 4) for s0 in (b"0", b"1") for s1 in (b"0", b"1")}


def test_epr_source_matches_bb84_exactly():
    env = HonestDriver([(BOB, b"1"), (ALICE, b"start")], [ALICE, BOB])
    bb84 = exec_network(pi_qrot(SMALL).network(env, DummyAdversary()), EXACT)
    epr = exec_network(pi_qrot(SMALL, source="epr").network(env, DummyAdversary()), EXACT)
    assert bb84 == epr


def test_trivial_commitments_match_functionality():
    env = HonestDriver([(BOB, b"0"), (ALICE, b"start")], [ALICE, BOB])
    fcom = exec_network(pi_qrot(SMALL).network(env, DummyAdversary()), EXACT)
    com = exec_network(pi_qrot_com(SMALL).network(env, DummyAdversary()), EXACT)
    assert fcom == com


@given(st.integers(0, 1), bit_vectors(2), bit_vectors(2), st.integers(0, 10_000))
def test_sampled_ot_outputs_chosen_string(c, v0, v1, seed):
    p = ProtocolParams(3, 5, 2)
    env = HonestDriver([(BOB, b"%d" % c), (ALICE, pack(v0, v1))], [BOB], poke=[ALICE, BOB])
    res = exec_network(pi_qot(p).network(env, DummyAdversary()), ExecConfig(mode=Sample(seed)))
    _, outputs = unpack(res.output, 2)
    assert unpack(unpack(outputs)[0], 2) == (BOB, (v0, v1)[c])
    assert res.norm_error < 1e-10


def test_machine_factories():
    assert alice_qrot(EXACT_PARAMS, rng=np.random.default_rng()).id == ALICE
    assert bob_qrot(EXACT_PARAMS, c=1).id == BOB
    assert len(commitment_ids(3)) == 6
    with pytest.raises(ValueError):
        alice_qrot(EXACT_PARAMS, source="laser")


class OverlappingBob(PresetBob):
    def _partition(self, ctx, state):
        n = self.p.n
        return to_mask(range(n), n), to_mask(range(n), n)


def test_alice_aborts_on_malformed_partition():
    env = AttackEnvironment(EXACT_PARAMS, BobStrategy.honest(0))
    env.puppets[BOB] = OverlappingBob(EXACT_PARAMS, 0)
    net = corrupt(pi_qrot(EXACT_PARAMS), [BOB]).network(env, DummyAdversary())
    outcome = exec_network(net, ExecConfig(mode=Sample(0))).output
    assert verdict(outcome) == ABORTED
    assert is_abort(unpack(outcome, 3)[2])
