"""Outcome distributions produced by exact enumeration or sampling."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable


class _Timeout:
    """Sentinel outcome: the activation budget ran out before any output."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TIMEOUT"

    def __reduce__(self):
        return (_Timeout, ())


TIMEOUT = _Timeout()


def outcome_label(outcome: Hashable) -> str:
    if outcome is TIMEOUT:
        return "TIMEOUT"
    if isinstance(outcome, (bytes, bytearray)):
        return outcome.hex()
    return repr(outcome)


class OutcomeDistribution(dict):
    """Mapping outcome -> probability.

    ``exact`` distributions hold :class:`~fractions.Fraction` weights; empirical
    ones hold frequencies from ``trials`` samples.
    """

    def __init__(self, *args, exact: bool = True, trials: int = 0, branches: int = 0,
                 max_norm_error: float = 0.0, **kwargs):
        super().__init__(*args, **kwargs)
        self.exact = exact
        self.trials = trials
        self.branches = branches
        self.max_norm_error = max_norm_error

    @classmethod
    def from_counts(cls, counts: dict, trials: int | None = None) -> "OutcomeDistribution":
        total = sum(counts.values()) if trials is None else trials
        return cls({k: v / total for k, v in counts.items() if v}, exact=False, trials=total)

    @classmethod
    def point(cls, outcome) -> "OutcomeDistribution":
        return cls({outcome: Fraction(1)})

    def total(self):
        return sum(self.values(), Fraction(0) if self.exact else 0.0)

    def map(self, fn) -> "OutcomeDistribution":
        """Pushforward through ``fn``."""
        out: dict = {}
        zero = Fraction(0) if self.exact else 0.0
        for k, p in self.items():
            key = fn(k)
            out[key] = out.get(key, zero) + p
        return OutcomeDistribution(out, exact=self.exact, trials=self.trials,
                                   branches=self.branches, max_norm_error=self.max_norm_error)

    def probability(self, predicate) -> Fraction | float:
        zero = Fraction(0) if self.exact else 0.0
        return sum((p for k, p in self.items() if predicate(k)), zero)

    def as_labels(self) -> dict[str, str | float]:
        """JSON-friendly view sorted by label."""
        items = sorted((outcome_label(k), p) for k, p in self.items())
        return {k: (str(p) if isinstance(p, Fraction) else p) for k, p in items}
