"""Protocol blueprints."""

from __future__ import annotations

from quclab.idealfunc import ALICE, BOB, F_ROT, FCom, FROT
from quclab.netexec import Protocol
from quclab.otproto.params import ProtocolParams
from quclab.otproto.qot import AlicePrime, BobPrime
from quclab.otproto.qrot import AliceQROT, BobQROT, commitment_ids


def commitment_machines(params: ProtocolParams, cls=FCom) -> list:
    return [cls(label, 1, BOB, ALICE) for label in commitment_ids(params.m)]


def pi_qrot(params: ProtocolParams, record_view: bool = False, source: str = "bb84") -> Protocol:
    return Protocol(
        [AliceQROT(params, "rot", "fcom", record_view, source), BobQROT(params, "rot", "fcom", record_view)]
        + commitment_machines(params),
        parties=[ALICE, BOB],
        name="QROT",
    )


def pi_qrot_com(params: ProtocolParams, record_view: bool = False) -> Protocol:
    return Protocol(
        [AliceQROT(params, "rot", "com", record_view), BobQROT(params, "rot", "com", record_view)],
        parties=[ALICE, BOB],
        name="QROT-com",
    )


def pi_qot(params: ProtocolParams, record_view: bool = False) -> Protocol:
    return Protocol(
        [AliceQROT(params, "ot", "fcom", record_view), BobQROT(params, "ot", "fcom", record_view)]
        + commitment_machines(params),
        parties=[ALICE, BOB],
        name="QOT",
    )


def pi_qot_prime(params: ProtocolParams) -> Protocol:
    """OT in the randomized-OT hybrid model; ``F_ROT`` is the composable slot."""
    return Protocol(
        [AlicePrime(params.ell), BobPrime(params.ell), FROT(F_ROT, params.ell)],
        parties=[ALICE, BOB],
        hybrids=[F_ROT],
        callers={ALICE: ALICE, BOB: BOB},
        name="QOT'",
    )
