import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quclab.errors import BadTargets, CapExceeded, LengthMismatch, NotUnitary
from quclab.qcore import (
    CNOT,
    HADAMARD,
    PAULI_X,
    Basis,
    BranchRecorder,
    QubitPool,
    SampleChooser,
    StateVector,
    bases_from_bits,
    bases_to_bits,
    snap_probability,
)

bits = st.text(alphabet="01", min_size=1, max_size=6).map(str.encode)

# |+> and |-> written out by hand
PLUS_STATE = np.array([1, 1]) / math.sqrt(2)
MINUS_STATE = np.array([1, -1]) / math.sqrt(2)


def test_bb84_single_qubit_amplitudes():
    pool = QubitPool()
    for bit, basis, expected in [
        (b"0", Basis.PLUS, [1, 0]),
        (b"1", Basis.PLUS, [0, 1]),
        (b"0", Basis.TIMES, PLUS_STATE),
        (b"1", Basis.TIMES, MINUS_STATE),
    ]:
        reg = pool.encode_bb84(bit, [basis])
        assert np.allclose(pool.statevector(reg).amplitudes, expected)


def test_conjugate_basis_outcome_is_fair():
    pool = QubitPool()
    reg = pool.encode_bb84(b"1", [Basis.PLUS])
    assert pool.exact_outcome_distribution(reg, [Basis.TIMES]) == pytest.approx({b"0": 0.5, b"1": 0.5})
    assert pool.exact_outcome_distribution(reg, [Basis.PLUS]) == {b"1": 1.0}


@given(bits, st.data())
def test_matching_basis_recovers_bits(x, data):
    th = data.draw(st.text(alphabet="01", min_size=len(x), max_size=len(x))).encode()
    pool = QubitPool()
    reg = pool.encode_bb84(x, bases_from_bits(th))
    assert pool.measure(reg, bases_from_bits(th), SampleChooser(0)) == x
    assert pool.norm_error() < 1e-12


@given(bits)
def test_mismatched_positions_are_uniform(x):
    th = bytes(48 + (i & 1) for i in range(len(x)))
    other = bytes(b ^ 1 for b in th)
    pool = QubitPool()
    reg = pool.encode_bb84(x, bases_from_bits(th))
    dist = pool.exact_outcome_distribution(reg, bases_from_bits(other))
    assert len(dist) == 2 ** len(x)
    assert all(p == pytest.approx(2.0 ** -len(x)) for p in dist.values())


def test_bell_pair_correlations():
    pool = QubitPool()
    a, b = pool.epr_pairs(1)
    both = a.concat(a, b)
    for basis in Basis:
        dist = pool.exact_outcome_distribution(both, [basis, basis])
        assert dist == pytest.approx({b"00": 0.5, b"11": 0.5})
    mixed = pool.exact_outcome_distribution(both, [Basis.PLUS, Basis.TIMES])
    assert mixed == pytest.approx({k: 0.25 for k in (b"00", b"01", b"10", b"11")})


def test_measuring_one_half_steers_the_other():
    pool = QubitPool()
    a, b = pool.epr_pairs(1)
    rec = BranchRecorder((1,))
    assert pool.measure(a, [Basis.TIMES], rec) == b"1"
    assert rec.prob == Fraction(1, 2)
    assert np.allclose(pool.statevector(b).amplitudes, MINUS_STATE)


def test_cnot_entangles_and_hadamard_inverts():
    pool = QubitPool()
    reg = pool.encode_bb84(b"00", [Basis.TIMES, Basis.PLUS])
    pool.apply_unitary(reg, [0, 1], CNOT)
    assert np.allclose(pool.statevector(reg).amplitudes, [1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)])
    single = pool.encode_bb84(b"1", [Basis.TIMES])
    pool.apply_unitary(single, [0], HADAMARD)
    assert np.allclose(pool.statevector(single).amplitudes, [0, 1])


def test_unitary_validation():
    pool = QubitPool()
    reg = pool.encode_bb84(b"01", [Basis.PLUS, Basis.PLUS])
    with pytest.raises(NotUnitary):
        pool.apply_unitary(reg, [0], np.array([[1, 1], [0, 1]]))
    with pytest.raises(NotUnitary):
        pool.apply_unitary(reg, [0], CNOT)
    with pytest.raises(BadTargets):
        pool.apply_unitary(reg, [0, 0], CNOT)
    with pytest.raises(BadTargets):
        pool.apply_unitary(reg, [2], PAULI_X)
    pool.apply_unitary(reg, [1], PAULI_X)
    assert pool.exact_outcome_distribution(reg, [Basis.PLUS] * 2) == {b"00": 1.0}


def test_cap_and_release():
    pool = QubitPool(cap=3)
    reg = pool.encode_bb84(b"010", [Basis.PLUS] * 3)
    with pytest.raises(CapExceeded):
        pool.encode_bb84(b"0", [Basis.PLUS])
    pool.release(reg.select([0]))
    pool.encode_bb84(b"0", [Basis.PLUS])
    with pytest.raises(BadTargets):
        pool.measure(reg.select([0]), [Basis.PLUS], SampleChooser(0))


def test_length_checks():
    pool = QubitPool()
    with pytest.raises(LengthMismatch):
        pool.encode_bb84(b"01", [Basis.PLUS])
    with pytest.raises(LengthMismatch):
        StateVector(2, np.zeros(3))


def test_pool_copy_is_independent():
    pool = QubitPool()
    reg = pool.encode_bb84(b"0", [Basis.TIMES])
    twin = pool.copy()
    pool.measure(reg, [Basis.PLUS], BranchRecorder((1,)))
    assert np.allclose(twin.statevector(reg).amplitudes, PLUS_STATE)


def test_basis_round_trip():
    assert bases_to_bits(bases_from_bits(b"0110")) == b"0110"
    assert Basis.parse("×") is Basis.TIMES and Basis.parse(b"+") is Basis.PLUS


def test_branch_recorder_enumerates_siblings():
    rec = BranchRecorder()
    assert rec.uniform(3) == 0
    assert rec.weighted([0.25, 0.0, 0.75]) == 0
    assert rec.prob == Fraction(1, 12)
    assert sorted(rec.sibling_prefixes()) == [(0, 2), (1,), (2,)]


@given(st.floats(0.01, 0.99))
def test_snap_probability_is_close(p):
    assert abs(float(snap_probability(p)) - p) < 1e-12
    assert snap_probability(0.5) == Fraction(1, 2)


def test_sample_chooser_is_seeded():
    a, b = SampleChooser(7), SampleChooser(7)
    assert [a.uniform(10) for _ in range(20)] == [b.uniform(10) for _ in range(20)]
    assert SampleChooser(1).weighted([0.0, 1.0]) == 1
