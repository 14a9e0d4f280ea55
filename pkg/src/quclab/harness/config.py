"""Experiment configuration: TOML file plus command-line overrides."""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, fields, replace

from quclab.errors import ConfigInvalid, ParamsInvalid
from quclab.otproto import ProtocolParams

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

MODES = ("default", "exact", "sample")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines an experiment's report.

    Protocol sizes come either from ``n``, ``m``, ``ell`` directly or from
    the profile ``(k, alpha, lam)``; with neither, each experiment uses its
    own defaults.  ``mode`` ``default`` runs every tier the experiment has;
    ``exact`` and ``sample`` restrict it.
    """

    experiment: str
    n: int | None = None
    m: int | None = None
    ell: int | None = None
    k: int | None = None
    alpha: float | None = None
    lam: float | None = None
    mode: str = "default"
    trials: int | None = None
    seed: int = 0
    out: str | None = None
    csv: str | None = None
    corpus: str | None = None

    def __post_init__(self):
        from quclab.harness.experiments import CATALOG

        if self.experiment not in CATALOG:
            raise ConfigInvalid(f"unknown experiment {self.experiment!r}; see `quclab list`")
        if self.mode not in MODES:
            raise ConfigInvalid(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.trials is not None and (not isinstance(self.trials, int) or self.trials < 1):
            raise ConfigInvalid("trials must be a positive integer")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigInvalid("seed must be a nonnegative integer")
        sizes = (self.n, self.m, self.ell)
        if any(v is not None for v in sizes) and any(v is None for v in sizes):
            raise ConfigInvalid("give all of n, m, ell or none of them")
        if self.k is not None and self.n is not None:
            raise ConfigInvalid("give either (n, m, ell) or the profile k, not both")
        try:
            self.params()
        except ParamsInvalid as exc:
            raise ConfigInvalid(f"invalid protocol parameters: {exc}") from None

    def params(self) -> ProtocolParams | None:
        """Explicit protocol sizes, or ``None`` when the experiment picks its own."""
        if self.n is not None:
            return ProtocolParams(self.n, self.m, self.ell)
        if self.k is not None:
            return ProtocolParams.from_security(
                self.k, 0.5 if self.alpha is None else self.alpha, 0.125 if self.lam is None else self.lam
            )
        return None

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        stray = set(data) - known
        if stray:
            raise ConfigInvalid(f"unknown configuration keys: {sorted(stray)}")
        if "experiment" not in data:
            raise ConfigInvalid("configuration needs an experiment name")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigInvalid(str(exc)) from None

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def load_config(path: str | None, experiment: str | None = None, **overrides) -> ExperimentConfig:
    """Read a flat TOML file of :class:`ExperimentConfig` keys and apply overrides."""
    data: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigInvalid(f"no such config file: {path}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigInvalid(f"{path}: {exc}") from None
    if experiment is not None:
        data["experiment"] = experiment
    data.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict(data)
