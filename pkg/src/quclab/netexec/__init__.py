"""The execution kernel: machines, routing, corruption and composition."""

from quclab.netexec.compose import Caller, Tagged, compose, tag
from quclab.netexec.distribution import TIMEOUT, OutcomeDistribution, outcome_label
from quclab.netexec.kernel import (
    DEFAULT_BRANCH_CAP,
    ExactTree,
    ExecConfig,
    ExecResult,
    RunState,
    Sample,
    TraceEntry,
    activate,
    deterministic_prefix,
    exec_network,
    network_step,
    run_once,
    run_trials,
)
from quclab.netexec.machine import Context, Machine, Out, Party, unrank_combination
from quclab.netexec.messages import (
    ADVERSARY,
    EMPTY_REGISTER,
    ENVIRONMENT,
    EPSILON,
    ClassicalMessage,
    pack,
    unpack,
)
from quclab.netexec.network import Network, Protocol
from quclab.netexec.standard import (
    ClassicalWrapper,
    CorruptionParty,
    DummyAdversary,
    DummyParty,
    classical_wrapper,
    corrupt,
    dummy_adversary,
    make_dummy_party,
)
from quclab.netexec.trace import trace_lines, write_trace

__all__ = [
    "ADVERSARY", "Caller", "ClassicalMessage", "ClassicalWrapper", "Context",
    "CorruptionParty", "DEFAULT_BRANCH_CAP", "DummyAdversary", "DummyParty",
    "EMPTY_REGISTER", "ENVIRONMENT", "EPSILON", "ExactTree", "ExecConfig", "ExecResult",
    "Machine", "Network", "Out", "OutcomeDistribution", "Party", "Protocol", "RunState",
    "Sample", "TIMEOUT", "Tagged", "TraceEntry", "activate", "classical_wrapper",
    "compose", "corrupt", "deterministic_prefix", "run_trials", "dummy_adversary", "exec_network", "make_dummy_party",
    "network_step", "outcome_label", "pack", "run_once", "tag", "trace_lines",
    "unpack", "unrank_combination", "write_trace",
]
