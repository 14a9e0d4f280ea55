"""Adversaries, environments and simulators, and distances between worlds."""

from quclab.adversim.attacks import (
    ABORTED,
    PASS,
    STUCK,
    AttackEnvironment,
    BobStrategy,
    attack_bob,
    attack_world,
    bob_program,
    verdict,
)
from quclab.adversim.environments import HonestDriver, default_finish
from quclab.adversim.puppets import PuppetEnvironment, TapeChooser, via
from quclab.adversim.scripts import AliceScript, ScriptSpec, alice_script, load_corpus
from quclab.adversim.simulators import (
    BOTH_CORRUPTED,
    NO_CORRUPTION,
    SIM_OUT,
    Emulator,
    SimulatedBob,
    ideal_world,
    real_world,
    replay_adversary,
    simulator_corrupted_alice,
    simulator_trivial,
)
from quclab.adversim.suites import Comparison, compare, corrupted_alice_suite, trivial_suite
from quclab.adversim.tv import TVEstimate, empirical, hoeffding_radius, tv_distance, tv_radius

__all__ = [
    "ABORTED", "AliceScript", "AttackEnvironment", "BOTH_CORRUPTED", "BobStrategy", "Comparison",
    "Emulator", "HonestDriver", "NO_CORRUPTION", "PASS", "PuppetEnvironment", "SIM_OUT", "STUCK",
    "ScriptSpec", "SimulatedBob", "TVEstimate", "TapeChooser", "alice_script", "attack_bob",
    "attack_world", "bob_program", "compare", "corrupted_alice_suite", "default_finish", "empirical",
    "hoeffding_radius", "ideal_world", "load_corpus", "real_world", "replay_adversary",
    "simulator_corrupted_alice", "simulator_trivial", "trivial_suite", "tv_distance", "tv_radius",
    "verdict", "via",
]
