"""Small-scale exact quantum state simulation."""

from quclab.qcore.choosers import BranchRecorder, SampleChooser, snap_probability
from quclab.qcore.state import (
    CHECK_TOL,
    CNOT,
    DEFAULT_QUBIT_CAP,
    HADAMARD,
    NORM_TOL,
    PAULI_X,
    Basis,
    QubitPool,
    QubitRegister,
    StateVector,
    bases_from_bits,
    bases_to_bits,
    bases_to_str,
)

__all__ = [
    "Basis",
    "BranchRecorder",
    "CHECK_TOL",
    "CNOT",
    "DEFAULT_QUBIT_CAP",
    "HADAMARD",
    "NORM_TOL",
    "PAULI_X",
    "QubitPool",
    "QubitRegister",
    "SampleChooser",
    "StateVector",
    "bases_from_bits",
    "bases_to_bits",
    "bases_to_str",
    "snap_probability",
]
