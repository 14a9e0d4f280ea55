"""Sources of randomness for machines and measurements.

A chooser answers two questions: ``uniform(n)`` (an index in ``range(n)``)
and ``weighted(probs)``.  ``SampleChooser`` draws from a seeded numpy
generator.  ``BranchRecorder`` replays a fixed prefix of choices and then
always takes the first viable option, recording every choice point so that
the exact-enumeration engine can revisit the siblings later.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

PRUNE_TOL = 1e-14
_SNAP_DENOMINATOR = 1 << 24
_SNAP_TOL = 1e-12


def snap_probability(p: float) -> Fraction:
    """Exact rational for a Born probability, snapping float noise away."""
    exact = Fraction(p)
    close = exact.limit_denominator(_SNAP_DENOMINATOR)
    return close if abs(float(close) - p) < _SNAP_TOL else exact


class SampleChooser:
    def __init__(self, rng: np.random.Generator | int | None = None):
        if not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        self.rng = rng

    def uniform(self, n: int) -> int:
        if n < 1:
            raise ValueError("uniform choice needs at least one option")
        return int(self.rng.integers(n)) if n > 1 else 0

    def weighted(self, probs: Sequence[float]) -> int:
        u = self.rng.random() * sum(probs)
        acc = 0.0
        last = 0
        for i, p in enumerate(probs):
            if p <= PRUNE_TOL:
                continue
            acc += p
            last = i
            if u < acc:
                return i
        return last


class BranchRecorder:
    """Deterministic chooser driven by a prefix of option indices.

    A recorded point is either an ``int`` n (uniform over ``range(n)``) or a
    tuple of ``(option, probability)`` pairs listing the viable options of a
    weighted choice; zero-probability outcomes are pruned.  The probability
    of the path taken is kept as an unreduced fraction ``num/den``.
    """

    __slots__ = ("prefix", "points", "chosen", "num", "den")

    def __init__(self, prefix: Sequence[int] = ()):
        self.prefix = prefix
        self.points: list = []
        self.chosen: list[int] = []
        self.num = 1
        self.den = 1

    @property
    def prob(self) -> Fraction:
        return Fraction(self.num, self.den)

    def uniform(self, n: int) -> int:
        if n < 1:
            raise ValueError("uniform choice needs at least one option")
        if n == 1:
            return 0
        pos = len(self.points)
        value = self.prefix[pos] if pos < len(self.prefix) else 0
        if not 0 <= value < n:
            raise RuntimeError("replayed choice is not viable; machine is not deterministic")
        self.points.append(n)
        self.chosen.append(value)
        self.den *= n
        return value

    def weighted(self, probs: Sequence[float]) -> int:
        total = float(sum(probs))
        options = tuple(
            (i, snap_probability(p / total)) for i, p in enumerate(probs) if p > PRUNE_TOL
        )
        if not options:
            raise ValueError("all options have zero probability")
        if len(options) == 1:
            # certain outcome: not a branch point
            return options[0][0]
        pos = len(self.points)
        if pos < len(self.prefix):
            value = self.prefix[pos]
            match = [p for opt, p in options if opt == value]
            if not match:
                raise RuntimeError("replayed choice is not viable; machine is not deterministic")
            p = match[0]
        else:
            value, p = options[0]
        self.points.append(options)
        self.chosen.append(value)
        self.num *= p.numerator
        self.den *= p.denominator
        return value

    def sibling_prefixes(self) -> list[tuple[int, ...]]:
        """Every prefix that diverges from this path after the replayed part."""
        out = []
        for j in range(len(self.prefix), len(self.points)):
            head = tuple(self.chosen[:j])
            point, taken = self.points[j], self.chosen[j]
            alternatives = range(point) if isinstance(point, int) else (opt for opt, _ in point)
            for opt in alternatives:
                if opt != taken:
                    out.append(head + (opt,))
        return out
