import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quclab.adversim import (
    PASS,
    BobStrategy,
    Emulator,
    HonestDriver,
    ScriptSpec,
    SimulatedBob,
    alice_script,
    attack_world,
    compare,
    corrupted_alice_suite,
    empirical,
    hoeffding_radius,
    ideal_world,
    load_corpus,
    real_world,
    replay_adversary,
    simulator_corrupted_alice,
    tv_distance,
    tv_radius,
    verdict,
)
from quclab.adversim.simulators import SIM_OUT, feed_rot
from quclab.errors import AlphabetMismatch, ConfigInvalid
from quclab.harness.experiments import parse_view, pass_probability_oracle, sender_privacy_views
from quclab.idealfunc import ALICE, BOB, FComEquivocal
from quclab.netexec import (
    TIMEOUT,
    CorruptionParty,
    DummyAdversary,
    ExactTree,
    ExecConfig,
    OutcomeDistribution,
    Protocol,
    exec_network,
    unpack,
)
from quclab.otproto import EXACT_PARAMS, ProtocolParams, commitment_machines, pi_qrot

EXACT = ExecConfig(mode=ExactTree(), qubit_cap=20)
SMALL = ProtocolParams(1, 2, 1)


# -- distances ----------------------------------------------------------------------


def test_tv_exact_and_estimated():
    p = OutcomeDistribution({b"a": Fraction(1, 2), b"b": Fraction(1, 2)})
    q = OutcomeDistribution({b"a": Fraction(1, 4), b"c": Fraction(3, 4)})
    assert tv_distance(p, q) == Fraction(3, 4)
    est = tv_distance(empirical({b"a": 60, b"b": 40}), empirical({b"a": 50, b"b": 50}))
    assert est.value == pytest.approx(0.1)
    assert est.radius == pytest.approx(tv_radius(100, 100))
    with pytest.raises(AlphabetMismatch):
        tv_distance({b"a": 1}, {"a": 1})
    with pytest.raises(AlphabetMismatch):
        tv_distance({b"a": 1}, {b"b": 1}, alphabet=[b"a"])
    assert tv_distance({TIMEOUT: Fraction(1)}, {b"a": Fraction(1)}) == 1


@given(st.integers(1, 10**7))
def test_hoeffding_radius_formula(n):
    assert hoeffding_radius(n) == pytest.approx(math.sqrt(math.log(200) / (2 * n)))


# -- corpus ------------------------------------------------------------------------------


def test_corpus_shape():
    corpus = load_corpus()
    assert len(corpus) >= 10
    assert sum(s.junk > 0 for s in corpus) >= 2
    assert all(ScriptSpec.from_dict(s.as_dict()) == s for s in corpus)


def test_script_validation():
    with pytest.raises(ConfigInvalid):
        ScriptSpec("x", announce="sometimes")
    with pytest.raises(ConfigInvalid):
        ScriptSpec.from_dict({"name": "x", "colour": "red"})
    with pytest.raises(ConfigInvalid):
        ScriptSpec("x", junk=-1)


# -- corrupted Alice ----------------------------------------------------------------------


@pytest.mark.parametrize("name", ["honest-c1", "announce-lie", "bell-pairs", "fuzz-101"])
def test_simulator_is_perfect_on_scripts(name):
    spec = next(s for s in load_corpus() if s.name == name)
    assert compare(name, real_world(EXACT_PARAMS, [ALICE], alice_script(EXACT_PARAMS, spec)),
                   ideal_world(EXACT_PARAMS, [ALICE], alice_script(EXACT_PARAMS, spec),
                               simulator_corrupted_alice(EXACT_PARAMS)), EXACT).perfect


class FixedPartitionBob(SimulatedBob):
    def _partition(self, ctx, state):
        super()._partition(ctx, state)
        return b"11", b"00"


class GuessedBasisBob(SimulatedBob):
    def _partition(self, ctx, state):
        state["theta_a"] = ctx.random_bits(self.p.n)
        return super()._partition(ctx, state)


@pytest.mark.parametrize("bob", [FixedPartitionBob, GuessedBasisBob])
def test_broken_simulators_are_caught(bob):
    p = EXACT_PARAMS
    sim = Emulator([DummyAdversary(), CorruptionParty(ALICE), bob(p)] + commitment_machines(p, FComEquivocal),
                   corrupted=[ALICE], exits={SIM_OUT: feed_rot})
    spec = next(s for s in load_corpus() if s.name == "honest-c0")
    env = alice_script(p, spec)
    assert compare("broken", real_world(p, [ALICE], env), ideal_world(p, [ALICE], env, sim), EXACT).tv > 0


def test_suite_shares_one_simulator():
    results = corrupted_alice_suite(EXACT_PARAMS, load_corpus()[:2])
    assert [r.name for r in results] == ["honest-c0", "honest-c1"]
    assert all(r.perfect and r.real.total() == 1 for r in results)


# -- corruption transparency -------------------------------------------------------------


@pytest.mark.parametrize("c", [b"0", b"1"])
def test_replaying_honest_programs_changes_nothing(c):
    env = HonestDriver([(BOB, c), (ALICE, b"start")], [ALICE, BOB])
    proto = pi_qrot(SMALL)
    honest = exec_network(proto.network(env, DummyAdversary()), EXACT)
    for parties in ([BOB], [ALICE], [ALICE, BOB]):
        replayed = exec_network(real_world(SMALL, parties, env, replay_adversary(proto, parties)), EXACT)
        assert tv_distance(honest, replayed) == 0, parties


# -- cheating Bob ---------------------------------------------------------------------------


@given(st.integers(1, 4), st.data())
def test_brute_force_oracle_is_three_quarters_power(d, data):
    bases = data.draw(st.text(alphabet="01", min_size=d, max_size=d)).encode()
    values = data.draw(st.text(alphabet="01", min_size=d, max_size=d)).encode()
    assert pass_probability_oracle(d, bases, values) == Fraction(3, 4) ** d


@pytest.mark.parametrize("source", ["bb84", "epr"])
def test_storing_bob_pass_rate_exact(source):
    p = ProtocolParams(1, 3, 1)
    net = attack_world(p, BobStrategy.no_measure_random_commit(b"010110"), stop_at_theta=True, alice_source=source)
    dist = exec_network(net, EXACT)
    assert dist.probability(lambda o: verdict(o) == PASS) == Fraction(9, 16)


def test_random_commitments_do_not_help():
    p = ProtocolParams(1, 2, 1)
    dist = exec_network(attack_world(p, BobStrategy.no_measure_random_commit(), seed=None, stop_at_theta=True), EXACT)
    assert dist.probability(lambda o: verdict(o) == PASS) == Fraction(3, 4)


def test_honest_bob_always_passes_and_learns_one_string():
    dist = exec_network(attack_world(SMALL, BobStrategy.honest(1)), EXACT)
    for outcome, p in dist.items():
        v, bob, alice = unpack(outcome, 3)
        assert v == PASS
        assert unpack(bob) == (unpack(alice, 2)[1],)


def test_storing_bob_who_passes_learns_both_strings():
    p = ProtocolParams(2, 3, 1)
    dist = exec_network(attack_world(p, BobStrategy.no_measure_random_commit(b"000000")), EXACT)
    passed = {o: q for o, q in dist.items() if verdict(o) == PASS}
    assert sum(passed.values()) == Fraction(3, 4)
    for outcome in passed:
        _, bob, alice = unpack(outcome, 3)
        assert unpack(bob)[0] == alice


def test_wrong_basis_bob_posterior():
    """Measuring everything in + reveals exactly the bits Alice prepared in +."""
    p = ProtocolParams(1, 2, 1)
    dist = exec_network(attack_world(p, BobStrategy.wrong_basis_all("+", 0), record_view=True), EXACT)
    agree = {0: Fraction(0), 1: Fraction(0)}
    mass = {0: Fraction(0), 1: Fraction(0)}
    for outcome, q in dist.items():
        _, bob, alice = unpack(outcome, 3)
        measured = next(unpack(o, 2)[1] for o in unpack(bob) if unpack(o, 2) and unpack(o, 2)[0] == b"measured")
        _, rand, _ = parse_view(alice)
        for i in range(p.m):
            basis = rand[b"theta~A"][i] - 48
            mass[basis] += q
            agree[basis] += q * (measured[i] == rand[b"x~A"][i])
    assert agree[0] / mass[0] == 1
    assert agree[1] / mass[1] == Fraction(1, 2)


# -- sender privacy ---------------------------------------------------------------------------


def hash_tv_oracle(n: int, ell: int) -> Fraction:
    """TV between (f, f(x)) and (f, uniform) averaged over the size of the hidden part.

    With honest Bob, each retained position lands in I_(1-c) when his basis
    differed from Alice's, independently with probability 1/2.  On those
    positions x is uniform and unknown to Bob, so only the hash can leak:
    s = f(x) is uniform unless f restricted to the hidden bits is not onto.
    """
    total = Fraction(0)
    for size in range(n + 1):
        weight = Fraction(math.comb(n, size), 2 ** n)
        per_f = Fraction(0)
        for d in itertools.product((0, 1), repeat=n + ell - 1):
            counts = {}
            for x in itertools.product((0, 1), repeat=size):
                out = tuple(sum(d[j - i + n - 1] * x[i] for i in range(size)) % 2 for j in range(ell))
                counts[out] = counts.get(out, 0) + 1
            per_f += sum(abs(Fraction(counts.get(y, 0), 2 ** size) - Fraction(1, 2 ** ell))
                         for y in itertools.product((0, 1), repeat=ell)) / 2
        total += weight * per_f / 2 ** (n + ell - 1)
    return total


def test_hash_oracle_closed_form():
    assert hash_tv_oracle(2, 1) == Fraction(9, 32)


@pytest.mark.slow
def test_sender_privacy_engine_agrees_with_oracle():
    from quclab.harness.experiments import pair_finish, privacy_world, with_uniform

    dist = exec_network(privacy_world(EXACT_PARAMS, b"0", pair_finish), EXACT)
    hashed, raw, marginal = sender_privacy_views(dist, 0)
    assert tv_distance(hashed, with_uniform(hashed, marginal)) == hash_tv_oracle(2, 1)
    assert tv_distance(raw, with_uniform(raw, marginal)) == 0
