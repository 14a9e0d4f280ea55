"""Total variation distance, exact or estimated from samples."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from quclab.errors import AlphabetMismatch
from quclab.netexec.distribution import TIMEOUT, OutcomeDistribution

CONFIDENCE = 0.99


class TVEstimate(NamedTuple):
    """Plug-in TV estimate and its McDiarmid radius at the given confidence."""

    value: float
    radius: float
    confidence: float = CONFIDENCE

    def __float__(self) -> float:
        return self.value


def hoeffding_radius(trials: int, confidence: float = CONFIDENCE) -> float:
    """Two-sided Hoeffding radius for a mean of ``trials`` values in [0, 1]."""
    if trials < 1:
        raise ValueError("need at least one trial")
    return math.sqrt(math.log(2 / (1 - confidence)) / (2 * trials))


def tv_radius(n_p: int, n_q: int, confidence: float = CONFIDENCE) -> float:
    """Bounded-differences radius for the plug-in TV of two independent samples.

    Changing one sample moves the estimate by at most ``1/n``, so McDiarmid's
    inequality gives the radius around the estimator's mean.
    """
    return math.sqrt(math.log(2 / (1 - confidence)) * (1 / n_p + 1 / n_q) / 2)


def _kind(outcome) -> str:
    if outcome is TIMEOUT:
        return "timeout"
    if isinstance(outcome, (bytes, bytearray)):
        return "bytes"
    return type(outcome).__name__


def check_alphabet(p: dict, q: dict, alphabet=None) -> None:
    kinds = {_kind(k) for k in list(p) + list(q)} - {"timeout"}
    if len(kinds) > 1:
        raise AlphabetMismatch(f"outcomes of different kinds: {sorted(kinds)}")
    if alphabet is not None:
        allowed = set(alphabet) | {TIMEOUT}
        stray = [k for k in list(p) + list(q) if k not in allowed]
        if stray:
            raise AlphabetMismatch(f"outcomes outside the alphabet: {stray[:3]!r}")


def tv_distance(p: dict, q: dict, alphabet=None):
    """``(1/2) sum |p - q|``.

    Exact when both sides are exact distributions (the result is a
    :class:`~fractions.Fraction`); otherwise a :class:`TVEstimate`.
    """
    check_alphabet(p, q, alphabet)
    keys = set(p) | set(q)
    exact_p = getattr(p, "exact", True)
    exact_q = getattr(q, "exact", True)
    if exact_p and exact_q:
        zero = Fraction(0)
        total = sum((abs(Fraction(p.get(k, zero)) - Fraction(q.get(k, zero))) for k in keys), zero)
        return total / 2
    value = sum(abs(float(p.get(k, 0)) - float(q.get(k, 0))) for k in keys) / 2
    n_p = getattr(p, "trials", 0) if not exact_p else 0
    n_q = getattr(q, "trials", 0) if not exact_q else 0
    if n_p and n_q:
        radius = tv_radius(n_p, n_q)
    else:
        radius = math.sqrt(math.log(2 / (1 - CONFIDENCE)) / (2 * max(n_p, n_q, 1)))
    return TVEstimate(value, radius)


def empirical(counts: dict) -> OutcomeDistribution:
    return OutcomeDistribution.from_counts(counts)
