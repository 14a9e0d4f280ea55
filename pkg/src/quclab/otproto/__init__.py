"""The commitment-based quantum OT protocols and their parameters."""

from quclab.otproto.hashing import HashFunction, hash_eval, hash_eval_batch, hash_sample
from quclab.otproto.networks import commitment_machines, pi_qot, pi_qot_prime, pi_qrot, pi_qrot_com
from quclab.otproto.params import EXACT_PARAMS, SAMPLE_PARAMS, ProtocolParams
from quclab.otproto.qot import AlicePrime, BobPrime
from quclab.otproto.qrot import (
    ABORT,
    NEXT,
    POKE,
    AliceQROT,
    BobQROT,
    commitment_ids,
    is_abort,
    theta_label,
    x_label,
)


def alice_qrot(params, rng=None, **options) -> AliceQROT:
    """Alice's machine; randomness comes from the execution, so ``rng`` is unused."""
    return AliceQROT(params, **options)


def bob_qrot(params, c=None, rng=None, **options) -> BobQROT:
    """Bob's machine; ``c`` arrives as environment input at run time."""
    return BobQROT(params, **options)


__all__ = [
    "ABORT", "AlicePrime", "AliceQROT", "BobPrime", "BobQROT", "EXACT_PARAMS", "HashFunction",
    "NEXT", "POKE", "ProtocolParams", "SAMPLE_PARAMS", "alice_qrot", "bob_qrot",
    "commitment_ids", "commitment_machines", "hash_eval", "hash_eval_batch", "hash_sample",
    "is_abort", "pi_qot", "pi_qot_prime", "pi_qrot", "pi_qrot_com", "theta_label", "x_label",
]
