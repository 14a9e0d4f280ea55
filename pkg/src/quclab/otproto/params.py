"""Protocol sizes: n retained bits, m qubits, ell output bits."""

from __future__ import annotations

import math
from dataclasses import dataclass

from quclab.errors import ParamsInvalid

_EPS = 1e-12


@dataclass(frozen=True)
class ProtocolParams:
    """Sizes for the OT protocols.

    ``alpha`` is the fraction of qubits spent on the test set and ``lam`` the
    extraction rate.  They are optional: desk-scale parameter sets are often
    given directly as ``(n, m, ell)``.  When given, ``m = ceil(n/(1-alpha))``
    and ``ell = floor(lam*n)`` must hold.
    """

    n: int
    m: int
    ell: int
    alpha: float | None = None
    lam: float | None = None

    def __post_init__(self):
        if not (isinstance(self.n, int) and isinstance(self.m, int) and isinstance(self.ell, int)):
            raise ParamsInvalid("n, m and ell must be integers")
        if self.n < 1:
            raise ParamsInvalid(f"n must be at least 1, got {self.n}")
        if self.m <= self.n:
            raise ParamsInvalid(f"need m > n, got m={self.m}, n={self.n}")
        if self.ell < 1:
            raise ParamsInvalid(f"ell must be at least 1, got {self.ell}")
        if self.alpha is not None:
            if not 0 < self.alpha < 1:
                raise ParamsInvalid(f"alpha must lie in (0, 1), got {self.alpha}")
            if self.m != math.ceil(self.n / (1 - self.alpha) - _EPS):
                raise ParamsInvalid(f"m={self.m} is not ceil(n/(1-alpha)) for alpha={self.alpha}")
        if self.lam is not None:
            if not 0 < self.lam < 0.25:
                raise ParamsInvalid(f"lam must lie in (0, 1/4), got {self.lam}")
            if self.ell != math.floor(self.lam * self.n + _EPS):
                raise ParamsInvalid(f"ell={self.ell} is not floor(lam*n) for lam={self.lam}")

    @classmethod
    def from_profile(cls, n: int, alpha: float, lam: float) -> "ProtocolParams":
        if not 0 < alpha < 1:
            raise ParamsInvalid(f"alpha must lie in (0, 1), got {alpha}")
        if not 0 < lam < 0.25:
            raise ParamsInvalid(f"lam must lie in (0, 1/4), got {lam}")
        m = math.ceil(n / (1 - alpha) - _EPS)
        ell = math.floor(lam * n + _EPS)
        return cls(n, m, ell, alpha, lam)

    @classmethod
    def from_security(cls, k: int, alpha: float = 0.5, lam: float = 0.125) -> "ProtocolParams":
        """Default scaling ``n = 4k``."""
        if k < 1:
            raise ParamsInvalid("security parameter must be positive")
        return cls.from_profile(4 * k, alpha, lam)

    @property
    def test_size(self) -> int:
        return self.m - self.n

    @property
    def in_theorem_regime(self) -> bool:
        """Whether ``ell/n < 1/4``, the rate under which security is claimed."""
        return 4 * self.ell < self.n

    def as_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "ell": self.ell, "alpha": self.alpha, "lam": self.lam}


EXACT_PARAMS = ProtocolParams(2, 3, 1)
SAMPLE_PARAMS = ProtocolParams(8, 12, 2)
