"""The experiment catalog.

Each experiment builds its networks, runs them exactly or by sampling, and
fills a :class:`~quclab.harness.report.Recorder` with measured quantities
and threshold checks.  The catalog names are stable.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from quclab.adversim import (
    BOTH_CORRUPTED,
    NO_CORRUPTION,
    PASS,
    BobStrategy,
    HonestDriver,
    alice_script,
    attack_world,
    corrupted_alice_suite,
    hoeffding_radius,
    load_corpus,
    real_world,
    trivial_suite,
    tv_distance,
    verdict,
)
from quclab.adversim.scripts import ScriptSpec
from quclab.bitstrings import from_mask, restrict
from quclab.harness.config import ExperimentConfig
from quclab.harness.report import Recorder
from quclab.idealfunc import (
    ALICE,
    BOB,
    ideal_ot,
    ideal_rot,
    trivial_commitment_protocol,
)
from quclab.netexec import (
    DummyAdversary,
    ExactTree,
    ExecConfig,
    Network,
    OutcomeDistribution,
    Protocol,
    Sample,
    classical_wrapper,
    compose,
    exec_network,
    pack,
    run_trials,
    unpack,
)
from quclab.otproto import (
    EXACT_PARAMS,
    SAMPLE_PARAMS,
    ProtocolParams,
    hash_eval_batch,
    pi_qot,
    pi_qot_prime,
    pi_qrot,
    pi_qrot_com,
)
from quclab.otproto.qrot import TAG_PARTITION

EXACT = ExecConfig(mode=ExactTree())
CONFIDENCE = 0.99


@dataclass(frozen=True)
class Experiment:
    name: str
    criterion: int
    summary: str
    run: Callable[[ExperimentConfig, Recorder], None]
    network: Callable[[ExperimentConfig], Network]


def _fmt(values: dict) -> str:
    return ", ".join(f"{k}: {v}" for k, v in values.items())


def _tiers(cfg: ExperimentConfig) -> tuple[bool, bool]:
    """Which tiers to run: ``(exact, sample)``."""
    return cfg.mode in ("default", "exact"), cfg.mode in ("default", "sample")


def _exact(rec: Recorder, net: Network, cfg: ExecConfig | None = None) -> OutcomeDistribution:
    dist = exec_network(net, cfg or EXACT)
    rec.hygiene(dist)
    return dist


def _sample(rec: Recorder, net: Network, trials: int, seed: int, cfg: ExecConfig | None = None) -> dict:
    records: list = []
    counts = run_trials(net, cfg or ExecConfig(mode=Sample(seed)), trials, seed=seed, records=records)
    rec.hygiene_runs(records)
    return counts


# -- correctness ------------------------------------------------------------------


def _ot_driver(params: ProtocolParams, inputs=None) -> HonestDriver:
    """Honest OT environment; random inputs unless ``inputs=(c, v0, v1)``."""
    if inputs is None:
        def inputs_fn(ctx):
            c = b"%d" % ctx.coin()
            return [(BOB, c), (ALICE, pack(ctx.random_bits(params.ell), ctx.random_bits(params.ell)))]
    else:
        c, v0, v1 = inputs
        def inputs_fn(ctx):
            return [(BOB, c), (ALICE, pack(v0, v1))]
    return HonestDriver(inputs_fn, [BOB], poke=[ALICE, BOB], finish=_ot_finish)


def _ot_finish(inputs, outputs) -> bytes:
    (_, c), (_, v) = inputs
    got = dict(outputs).get(BOB, b"")
    v0, v1 = unpack(v, 2)
    return b"ok" if got == (v0, v1)[c[0] - 48] else b"wrong"


def _correctness(cfg: ExperimentConfig, rec: Recorder) -> None:
    do_exact, do_sample = _tiers(cfg)
    if do_sample:
        params = cfg.params() or SAMPLE_PARAMS
        trials = cfg.trials or 10_000
        counts = _sample(rec, pi_qot(params).network(_ot_driver(params), DummyAdversary()), trials, cfg.seed)
        failures = trials - counts.get(b"ok", 0)
        rec.measure("sample", {"params": params.as_dict(), "trials": trials, "failures": failures})
        rec.check("sample-failures", failures == 0, f"{failures} failures in {trials} trials")
        for label, count in sorted(counts.items(), key=lambda kv: repr(kv[0])):
            rec.row(tier="sample", outcome=label, count=count)
    if do_exact:
        params = EXACT_PARAMS if cfg.mode == "default" or cfg.params() is None else cfg.params()
        one, zero = b"1" * params.ell, b"0" * params.ell
        probs = {}
        for c in (b"0", b"1"):
            dist = _exact(rec, pi_qot(params).network(_ot_driver(params, (c, zero, one)), DummyAdversary()))
            probs[f"c={c.decode()}"] = dist.get(b"ok", Fraction(0))
        rec.measure("exact", {"params": params.as_dict(), "prob_correct": probs})
        rec.check("exact-probability-one", all(p == 1 for p in probs.values()),
                  _fmt(probs))


def _correctness_net(cfg):
    params = cfg.params() or SAMPLE_PARAMS
    return pi_qot(params).network(_ot_driver(params), DummyAdversary())


# -- corrupted Alice ---------------------------------------------------------------


def _exact_params(cfg: ExperimentConfig) -> ProtocolParams:
    return cfg.params() or EXACT_PARAMS


def _corrupted_alice(cfg: ExperimentConfig, rec: Recorder) -> None:
    params = _exact_params(cfg)
    corpus = load_corpus(cfg.corpus)
    results = corrupted_alice_suite(params, corpus, progress=lambda c: rec.row(script=c.name, tv=c.tv))
    for r in results:
        rec.hygiene(r.real)
        rec.hygiene(r.ideal)
    tvs = {r.name: r.tv for r in results}
    rec.measure("params", params.as_dict())
    rec.measure("tv", tvs)
    rec.measure("scripts", len(results))
    rec.check("corpus-size", len(results) >= 10, f"{len(results)} scripts")
    bad = [n for n, tv in tvs.items() if tv != 0]
    rec.check("tv-zero", not bad, "all zero" if not bad else f"nonzero: {bad}")


def _corrupted_alice_net(cfg):
    params = _exact_params(cfg)
    return real_world(params, [ALICE], alice_script(params, load_corpus(cfg.corpus)[0]))


# -- trivial cases ------------------------------------------------------------------


def _trivial(cfg: ExperimentConfig, rec: Recorder) -> None:
    params = _exact_params(cfg)
    tvs = {}
    for case in (NO_CORRUPTION, BOTH_CORRUPTED):
        for r in trivial_suite(params, case, progress=lambda c: rec.row(suite=c.name, tv=c.tv)):
            tvs[r.name] = r.tv
            rec.hygiene(r.real)
            rec.hygiene(r.ideal)
    rec.measure("params", params.as_dict())
    rec.measure("tv", tvs)
    for case in (NO_CORRUPTION, BOTH_CORRUPTED):
        bad = [n for n, tv in tvs.items() if n.startswith(case + "/") and tv != 0]
        rec.check(f"tv-zero-{case}", not bad, "all zero" if not bad else f"nonzero: {bad}")


def _trivial_net(cfg):
    params = _exact_params(cfg)
    return real_world(params, (), HonestDriver([(BOB, b"1"), (ALICE, b"start")], [ALICE, BOB]))


# -- cheating Bob ------------------------------------------------------------------


def pass_probability_oracle(d: int, commit_bases: bytes, commit_values: bytes) -> Fraction:
    """Brute force over Alice's bases and values on the ``d`` tested positions.

    Alice accepts a position when her basis differs from Bob's committed one
    or her value equals his committed value.  Bob holds his qubits
    untouched, so each of her outcomes is uniform.
    """
    good = 0
    for bases in itertools.product((0, 1), repeat=d):
        for values in itertools.product((0, 1), repeat=d):
            good += all(
                b != commit_bases[i] - 48 or v == commit_values[i] - 48
                for i, (b, v) in enumerate(zip(bases, values))
            )
    return Fraction(good, 4 ** d)


def _commit_string(m: int, seed: int) -> bytes:
    rng = np.random.default_rng(seed)
    return bytes(48 + int(b) for b in rng.integers(0, 2, size=2 * m))


def _cheat_bob(cfg: ExperimentConfig, rec: Recorder) -> None:
    do_exact, do_sample = _tiers(cfg)
    qcfg = ExecConfig(mode=ExactTree(), qubit_cap=40)
    if do_exact:
        rates = {}
        for d in range(1, 9):
            params = ProtocolParams(1, 1 + d, 1)
            commit = _commit_string(params.m, cfg.seed + d)
            net = attack_world(params, BobStrategy.no_measure_random_commit(commit),
                               stop_at_theta=True, alice_source="epr")
            dist = _exact(rec, net, qcfg)
            rate = dist.probability(lambda o: verdict(o) == PASS)
            # Alice tests every index except the single retained one, whichever it is
            oracle_values = {
                pass_probability_oracle(d, restrict(commit[:params.m], kept), restrict(commit[params.m:], kept))
                for kept in itertools.combinations(range(params.m), d)
            }
            expected = Fraction(3, 4) ** d
            rates[d] = {"engine": rate, "formula": expected, "brute_force": sorted(oracle_values)}
            rec.row(tier="exact", d=d, rate=rate, expected=expected)
            rec.check(f"exact-d={d}", rate == expected and oracle_values == {expected},
                      f"engine {rate}, formula {expected}, brute force {', '.join(map(str, sorted(oracle_values)))}")
        rec.measure("exact", rates)
    if do_sample:
        params = cfg.params() or ProtocolParams(1, 17, 1)
        d = params.test_size
        trials = cfg.trials or 100_000
        commit = _commit_string(params.m, cfg.seed)
        net = attack_world(params, BobStrategy.no_measure_random_commit(commit),
                           stop_at_theta=True, alice_source="epr")
        counts = _sample(rec, net, trials, cfg.seed, ExecConfig(mode=Sample(cfg.seed), qubit_cap=2 * params.m + 4))
        passes = sum(c for o, c in counts.items() if verdict(o) == PASS)
        rate = passes / trials
        expected = 0.75 ** d
        radius = hoeffding_radius(trials, CONFIDENCE)
        rec.measure("sample", {"params": params.as_dict(), "trials": trials, "passes": passes,
                               "rate": rate, "expected": expected, "radius": radius})
        rec.row(tier="sample", d=d, rate=rate, expected=expected)
        rec.check("sample-within-hoeffding", abs(rate - expected) <= radius,
                  f"rate {rate:.5f} vs (3/4)^{d} = {expected:.5f}, radius {radius:.5f}")


def _cheat_bob_net(cfg):
    params = cfg.params() or ProtocolParams(1, 17, 1)
    return attack_world(params, BobStrategy.no_measure_random_commit(_commit_string(params.m, cfg.seed)),
                        stop_at_theta=True, alice_source="epr")


# -- privacy ---------------------------------------------------------------------------


def parse_view(output: bytes) -> tuple[bytes, dict, list]:
    """``(payload, randomness, messages)`` from a ``record_view`` output."""
    payload, view = unpack(output, 2)
    rand, msgs = {}, []
    for entry in unpack(view):
        fields = unpack(entry)
        if fields and len(fields) == 3 and fields[0] == b"rand":
            rand[fields[1]] = fields[2]
        else:
            msgs.append(tuple(unpack(entry, 2)))
    return payload, rand, msgs


def pair_finish(inputs, outputs) -> bytes:
    got = dict(outputs)
    return pack(got.get(ALICE, b""), got.get(BOB, b""))


def privacy_world(params: ProtocolParams, c: bytes, finish) -> Network:
    proto = Protocol(
        list(pi_qrot(params, record_view=True).machines), parties=[ALICE, BOB], name="QROT-views"
    )
    env = HonestDriver([(BOB, c), (ALICE, b"start")], [ALICE, BOB], finish=finish)
    return proto.network(env, DummyAdversary())


def sender_privacy_views(dist: OutcomeDistribution, c: int) -> tuple[dict, dict, dict]:
    """Joint laws of Bob's view with ``s_{1-c}`` and with Alice's raw bits on ``I_{1-c}``.

    Returns ``(hashed, raw, view_marginal)``.
    """
    hashed: dict = {}
    raw: dict = {}
    marginal: dict = {}
    for outcome, p in dist.items():
        alice_out, bob_out = unpack(outcome, 2)
        s_pair, a_rand, a_msgs = parse_view(alice_out)
        s_other = unpack(s_pair, 2)[1 - c]
        masks = next(unpack(payload, 3) for sender, payload in a_msgs
                     if sender == BOB and unpack(payload, 3) and unpack(payload, 3)[0] == TAG_PARTITION)
        T = from_mask(a_rand[b"T"])
        retained = [i for i in range(len(a_rand[b"x~A"])) if i not in T]
        x_retained = restrict(a_rand[b"x~A"], retained)
        x_other = restrict(x_retained, from_mask(masks[2 - c]))
        hashed[(bob_out, s_other)] = hashed.get((bob_out, s_other), 0) + p
        raw[(bob_out, x_other)] = raw.get((bob_out, x_other), 0) + p
        marginal[bob_out] = marginal.get(bob_out, 0) + p
    return hashed, raw, marginal


def with_uniform(joint: dict, marginal: dict) -> dict:
    """``view`` from ``marginal`` paired with an independent uniform string of each view's length."""
    lengths = {}
    for (view, s) in joint:
        lengths.setdefault(view, set()).add(len(s))
    out = {}
    for view, p in marginal.items():
        for length in lengths[view]:
            for bits in itertools.product(b"01", repeat=length):
                out[(view, bytes(bits))] = p / len(lengths[view]) / 2 ** length
    return out


def _sender_privacy(cfg: ExperimentConfig, rec: Recorder) -> None:
    params = _exact_params(cfg)
    c = 0
    dist = _exact(rec, privacy_world(params, b"%d" % c, pair_finish))
    hashed, raw, marginal = sender_privacy_views(dist, c)
    tv_hashed = tv_distance(hashed, with_uniform(hashed, marginal))
    tv_raw = tv_distance(raw, with_uniform(raw, marginal))
    rec.measure("params", params.as_dict())
    rec.measure("tv_view_and_s_other", tv_hashed)
    rec.measure("tv_view_and_raw_bits", tv_raw)
    rec.measure("theorem_regime", params.in_theorem_regime)
    rec.row(quantity="view,s_other", tv=tv_hashed)
    rec.row(quantity="view,raw_bits", tv=tv_raw)
    rec.check("raw-bits-hidden", tv_raw == 0, f"TV {tv_raw}")
    rec.check("tv-zero", tv_hashed == 0, f"TV {tv_hashed}")


def _privacy_net(cfg):
    return privacy_world(_exact_params(cfg), b"0", pair_finish)


def _alice_only(inputs, outputs) -> bytes:
    return dict(outputs).get(ALICE, b"")


def _receiver_privacy(cfg: ExperimentConfig, rec: Recorder) -> None:
    params = _exact_params(cfg)
    views = [_exact(rec, privacy_world(params, c, _alice_only)) for c in (b"0", b"1")]
    tv = tv_distance(views[0], views[1])
    rec.measure("params", params.as_dict())
    rec.measure("tv_alice_view", tv)
    rec.measure("outcomes", len(views[0]))
    rec.row(quantity="alice_view c=0 vs c=1", tv=tv)
    rec.check("tv-zero", tv == 0, f"TV {tv}")


# -- composition -------------------------------------------------------------------------


def _composition(cfg: ExperimentConfig, rec: Recorder) -> None:
    params = _exact_params(cfg)
    one, zero = b"1" * params.ell, b"0" * params.ell
    tvs = {}
    for c in (b"0", b"1"):
        env = _ot_driver(params, (c, zero, one))
        direct = _exact(rec, pi_qot(params).network(env, DummyAdversary()))
        composed = _exact(rec, compose(pi_qot_prime(params), pi_qrot(params), 1).network(env, DummyAdversary()))
        tvs[f"c={c.decode()}"] = tv_distance(direct, composed)
        rec.row(input=f"c={c.decode()}", tv=tvs[f"c={c.decode()}"], outcomes=len(direct))
    rec.measure("params", params.as_dict())
    rec.measure("tv", tvs)
    rec.check("tv-zero", all(v == 0 for v in tvs.values()), _fmt(tvs))


def _composition_net(cfg):
    params = _exact_params(cfg)
    return compose(pi_qot_prime(params), pi_qrot(params), 1).network(
        _ot_driver(params, (b"1", b"0" * params.ell, b"1" * params.ell)), DummyAdversary())


# -- lifting wrapper -----------------------------------------------------------------------


def _wrap(net: Network, which, times: int = 1) -> Network:
    machines = []
    for m in net.machines:
        if which(m):
            for _ in range(times):
                m = classical_wrapper(m)
        machines.append(m)
    return Network(machines, net.parties)


def lifting_suite(params: ProtocolParams) -> list[tuple[str, Network]]:
    """Small networks whose machines the wrapper is exercised on."""
    ot_env = _ot_driver(params, (b"1", b"0" * params.ell, b"1" * params.ell))
    rot_env = HonestDriver([(BOB, b"1"), (ALICE, b"start")], [ALICE, BOB])
    com_env = HonestDriver([(BOB, pack(b"commit", b"1")), (BOB, b"open")], [ALICE], poke=[BOB])
    return [
        ("ideal-ot", ideal_ot(params.ell).network(ot_env, DummyAdversary())),
        ("ideal-rot", ideal_rot(params.ell).network(rot_env, DummyAdversary())),
        ("trivial-commitment", trivial_commitment_protocol().network(com_env, DummyAdversary())),
        ("qot-prime", pi_qot_prime(params).network(ot_env, DummyAdversary())),
        ("qrot-com", pi_qrot_com(params).network(rot_env, DummyAdversary())),
        ("qrot", pi_qrot(params).network(rot_env, DummyAdversary())),
    ]


def _lifting(cfg: ExperimentConfig, rec: Recorder) -> None:
    params = cfg.params() or ProtocolParams(1, 2, 1)
    wrapped_machines = set()
    identical, idempotent = {}, {}
    for name, net in lifting_suite(params):
        base = _exact(rec, net)
        once = _exact(rec, _wrap(net, lambda m: m.classical))
        all_once = _exact(rec, _wrap(net, lambda m: True))
        all_twice = _exact(rec, _wrap(net, lambda m: True, 2))
        wrapped_machines.update(repr(m) for m in net.machines if m.classical)
        identical[name] = tv_distance(base, once)
        idempotent[name] = tv_distance(all_once, all_twice)
        rec.row(network=name, tv_classical_wrapped=identical[name], tv_idempotence=idempotent[name])
    rec.measure("params", params.as_dict())
    rec.measure("classical_machines", sorted(wrapped_machines))
    rec.measure("tv_wrapped_vs_plain", identical)
    rec.measure("tv_once_vs_twice", idempotent)
    rec.check("classical-unchanged", all(v == 0 for v in identical.values()), _fmt(identical))
    rec.check("idempotent", all(v == 0 for v in idempotent.values()), _fmt(idempotent))


def _lifting_net(cfg):
    params = cfg.params() or ProtocolParams(1, 2, 1)
    return _wrap(lifting_suite(params)[3][1], lambda m: m.classical)


# -- hashing ---------------------------------------------------------------------------------


def hash_pairs(input_len: int, count: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """``count`` distinct pairs ``x != y`` of bit vectors, fixed by ``seed``."""
    rng = np.random.default_rng(seed)
    pairs, seen = [], set()
    while len(pairs) < count:
        x = rng.integers(0, 2, size=input_len)
        y = rng.integers(0, 2, size=input_len)
        key = (x.tobytes(), y.tobytes())
        if np.array_equal(x, y) or key in seen:
            continue
        seen.add(key)
        pairs.append((x, y))
    return pairs


def _hashing(cfg: ExperimentConfig, rec: Recorder) -> None:
    params = cfg.params() or SAMPLE_PARAMS
    L, ell = params.n, params.ell
    samples = cfg.trials or 100_000
    rng = np.random.default_rng(cfg.seed)
    bound = 2.0 ** -ell
    radius = hoeffding_radius(samples, CONFIDENCE)
    worst = 0.0
    exact_worst = Fraction(0)
    all_diagonals = np.array(list(itertools.product((0, 1), repeat=L + ell - 1)), dtype=np.int64) \
        if L + ell - 1 <= 14 else None
    for index, (x, y) in enumerate(hash_pairs(L, 100, cfg.seed)):
        diag = rng.integers(0, 2, size=(samples, L + ell - 1))
        collide = np.all(hash_eval_batch(diag, x, ell) == hash_eval_batch(diag, y, ell), axis=1)
        rate = float(collide.mean())
        worst = max(worst, rate)
        if all_diagonals is not None:
            hits = np.all(hash_eval_batch(all_diagonals, x, ell) == hash_eval_batch(all_diagonals, y, ell), axis=1)
            exact_worst = max(exact_worst, Fraction(int(hits.sum()), len(all_diagonals)))
        rec.row(pair=index, rate=rate)
    rec.measure("input_len", L)
    rec.measure("ell", ell)
    rec.measure("samples_per_pair", samples)
    rec.measure("max_empirical_collision", worst)
    rec.measure("bound", bound)
    rec.measure("radius", radius)
    if all_diagonals is not None:
        rec.measure("max_exact_collision", exact_worst)
        rec.check("exact-universal", exact_worst <= Fraction(1, 2 ** ell), f"max exact {exact_worst}")
    rec.check("empirical-within-bound", worst <= bound + radius,
              f"max rate {worst:.5f} <= {bound:.5f} + {radius:.5f}")


def _hashing_net(cfg):
    return _correctness_net(cfg)


CATALOG: dict[str, Experiment] = {
    e.name: e
    for e in [
        Experiment("correctness", 1, "honest OT outputs v_c (sampled and exact)", _correctness, _correctness_net),
        Experiment("corrupted-alice-tv", 2, "real vs simulated world with Alice corrupted, corpus of scripts",
                   _corrupted_alice, _corrupted_alice_net),
        Experiment("trivial-cases-tv", 3, "real vs ideal with no party or both parties corrupted",
                   _trivial, _trivial_net),
        Experiment("cheat-bob-abort", 4, "pass rate of a Bob who never measures", _cheat_bob, _cheat_bob_net),
        Experiment("sender-privacy", 5, "Bob's view and s_(1-c) against a uniform string",
                   _sender_privacy, _privacy_net),
        Experiment("receiver-privacy", 6, "Alice's view for c=0 against c=1", _receiver_privacy, _privacy_net),
        Experiment("composition-equivalence", 7, "composed OT against the direct OT protocol",
                   _composition, _composition_net),
        Experiment("lifting-wrapper", 8, "classical wrapper leaves classical machines unchanged, idempotent",
                   _lifting, _lifting_net),
        Experiment("hash-universality", 9, "collision rate of random Toeplitz hashing", _hashing, _hashing_net),
    ]
}


def list_experiments() -> list[Experiment]:
    return list(CATALOG.values())


def get_experiment(name: str) -> Experiment:
    from quclab.errors import ConfigInvalid

    try:
        return CATALOG[name]
    except KeyError:
        raise ConfigInvalid(f"unknown experiment {name!r}; see `quclab list`") from None


def run_experiment(cfg: ExperimentConfig) -> "ExperimentReport":
    """Run ``cfg.experiment`` and return its report."""
    from quclab.harness.report import ExperimentReport

    exp = get_experiment(cfg.experiment)
    rec = Recorder()
    start = time.perf_counter()
    exp.run(cfg, rec)
    wall = time.perf_counter() - start
    config = {k: v for k, v in cfg.as_dict().items() if k not in ("out", "csv")}
    return ExperimentReport.from_recorder(exp.name, exp.criterion, config, rec, wall)
