"""Environment suites and real-versus-ideal comparisons for each corruption case."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from quclab.adversim.environments import HonestDriver
from quclab.adversim.puppets import PuppetEnvironment
from quclab.adversim.scripts import ScriptSpec, alice_script, junk_schedule, load_corpus
from quclab.adversim.simulators import (
    BOTH_CORRUPTED,
    NO_CORRUPTION,
    ideal_world,
    real_world,
    simulator_corrupted_alice,
    simulator_trivial,
)
from quclab.adversim.tv import tv_distance
from quclab.idealfunc import ALICE, BOB, F_ROT
from quclab.netexec import (
    ADVERSARY,
    ClassicalMessage,
    ExactTree,
    ExecConfig,
    Machine,
    OutcomeDistribution,
    exec_network,
)
from quclab.otproto import AliceQROT, BobQROT, ProtocolParams, commitment_ids

EXACT = ExecConfig(mode=ExactTree(), qubit_cap=20)


@dataclass(frozen=True)
class Comparison:
    name: str
    tv: object
    real_branches: int
    ideal_branches: int
    real: OutcomeDistribution | None = field(default=None, repr=False, compare=False)
    ideal: OutcomeDistribution | None = field(default=None, repr=False, compare=False)

    @property
    def perfect(self) -> bool:
        return self.tv == 0


def compare(name: str, real, ideal, cfg: ExecConfig = EXACT) -> Comparison:
    p = exec_network(real, cfg)
    q = exec_network(ideal, cfg)
    return Comparison(name, tv_distance(p, q), p.branches, q.branches, p, q)


def _instruct(recipient: bytes, payload: bytes) -> tuple[bytes, bytes]:
    return ADVERSARY, ClassicalMessage(ADVERSARY, recipient, payload).encode()


def no_corruption_envs(params: ProtocolParams) -> list[tuple[str, Machine]]:
    """Honest inputs, plus an environment that also pushes junk through the adversary."""
    first = commitment_ids(params.m)[0]
    probing = [
        _instruct(BOB, b"0"),
        (BOB, b"0"),
        _instruct(first, b"open"),
        _instruct(F_ROT, b"1"),
        (ALICE, b"start"),
        _instruct(ALICE, b"next"),
    ]
    return [
        ("honest-c1", HonestDriver([(BOB, b"1"), (ALICE, b"start")], [ALICE, BOB])),
        ("probing-c0", HonestDriver(probing, [ALICE, BOB])),
    ]


def both_corrupted_envs(params: ProtocolParams, fuzz_seeds=(11, 22, 33)) -> list[tuple[str, Machine]]:
    """The environment runs both honest programs itself, optionally with seeded junk."""
    def puppets(c: bytes, seed: int, junk: int):
        spec = ScriptSpec(name="both", junk=junk, seed=seed)
        return PuppetEnvironment(
            [AliceQROT(params), BobQROT(params)], [(BOB, c), (ALICE, b"start")],
            seed=seed, junk=junk_schedule(spec, params),
        )
    envs = [("honest-c0", puppets(b"0", 1, 0)), ("honest-c1", puppets(b"1", 2, 0))]
    envs += [(f"fuzz-{s}", puppets(b"%d" % (s & 1), s, 8)) for s in fuzz_seeds]
    return envs


def corrupted_alice_suite(params: ProtocolParams, corpus=None, cfg: ExecConfig = EXACT,
                          progress: Callable | None = None) -> list[Comparison]:
    """Every corpus script against one simulator instance."""
    sim = simulator_corrupted_alice(params)
    out = []
    for spec in corpus if corpus is not None else load_corpus():
        env = alice_script(params, spec)
        out.append(compare(spec.name, real_world(params, [ALICE], env), ideal_world(params, [ALICE], env, sim), cfg))
        if progress:
            progress(out[-1])
    return out


def trivial_suite(params: ProtocolParams, case: str, cfg: ExecConfig = EXACT,
                  progress: Callable | None = None) -> list[Comparison]:
    if case == NO_CORRUPTION:
        corrupted, envs = (), no_corruption_envs(params)
    elif case == BOTH_CORRUPTED:
        corrupted, envs = (ALICE, BOB), both_corrupted_envs(params)
    else:
        raise ValueError(f"unknown trivial case {case!r}")
    sim = simulator_trivial(case, params)
    out = []
    for name, env in envs:
        out.append(compare(f"{case}/{name}", real_world(params, corrupted, env),
                           ideal_world(params, corrupted, env, sim), cfg))
        if progress:
            progress(out[-1])
    return out
