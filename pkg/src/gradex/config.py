"""Network configuration shared by every module."""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict


class ConfigError(ValueError):
    """Raised for parameter sets outside the model's admissible range."""


class ExchangeMode(str, enum.Enum):
    # one bit per undirected edge, canonical lower->higher direction
    EDGE = "edge"
    # one bit in each direction, each slot split into two reversed halves
    DIRECTION = "direction"


@dataclass(frozen=True)
class NetworkConfig:
    """Physical and geometric parameters of one network realization.

    Defaults are the reference scenario: 100 m disk, 30 dBm transmitters,
    -174 dBm/Hz noise over 10 MHz, path-loss exponent 2 and a 1 m reference
    gain of 1e-7.
    """

    n: int = 1000
    radius: float = 100.0
    beta: float = 0.3
    alpha: float = 2.0
    power_dbm: float = 30.0
    noise_psd_dbm_hz: float = -174.0
    bandwidth_hz: float = 10e6
    ref_gain: float = 1e-7
    seed: int = 0
    exchange_mode: ExchangeMode = ExchangeMode.EDGE

    def __post_init__(self) -> None:
        if not isinstance(self.exchange_mode, ExchangeMode):
            try:
                object.__setattr__(self, "exchange_mode", ExchangeMode(self.exchange_mode))
            except ValueError:
                raise ConfigError(f"unknown exchange_mode {self.exchange_mode!r}") from None
        if int(self.n) != self.n or self.n < 2:
            raise ConfigError(f"n must be an integer >= 2, got {self.n}")
        if not self.radius > 0:
            raise ConfigError(f"radius must be positive, got {self.radius}")
        if not 0.0 < self.beta < 0.5:
            raise ConfigError(f"beta must lie in (0, 1/2), got {self.beta}")
        if not self.alpha >= 2.0:
            raise ConfigError(f"alpha must be >= 2, got {self.alpha}")
        if not self.bandwidth_hz > 0:
            raise ConfigError(f"bandwidth_hz must be positive, got {self.bandwidth_hz}")
        if not self.ref_gain > 0:
            raise ConfigError(f"ref_gain must be positive, got {self.ref_gain}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must fit in 64 unsigned bits, got {self.seed}")

    def with_(self, **changes: Any) -> "NetworkConfig":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["exchange_mode"] = self.exchange_mode.value
        return d

    @classmethod
    def field_names(cls) -> list:
        return [f.name for f in fields(cls)]
