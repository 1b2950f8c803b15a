"""Sweep configuration, flat ``key=value`` config files and grid parsing."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from gradex.config import ConfigError, NetworkConfig
from gradex.scheduler import OrderPolicy

DEFAULT_N_VALUES = tuple(range(1000, 2001, 100))
DEFAULT_BETA_VALUES = tuple(round(0.10 + 0.05 * k, 10) for k in range(8))


@dataclass(frozen=True)
class SweepConfig:
    base: NetworkConfig = field(default_factory=NetworkConfig)
    n_values: Tuple[int, ...] = DEFAULT_N_VALUES
    beta_values: Tuple[float, ...] = DEFAULT_BETA_VALUES
    trials: int = 1
    order: OrderPolicy = OrderPolicy.DEGREE
    # empirical trials above this many nodes are refused (conflict graph is ~|E|^2)
    max_nodes: int = 4000
    workers: int = 1
    out: Optional[str] = None
    format: str = "csv"
    emit_plot: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.n_values or not self.beta_values:
            raise ConfigError("n_values and beta_values must be non-empty")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        object.__setattr__(self, "order", OrderPolicy(self.order))
        for n in self.n_values:
            for beta in self.beta_values:
                self.base.with_(n=n, beta=beta)  # raises ConfigError when invalid

    def cells(self) -> List[Tuple[int, int, float]]:
        """(n, beta_index, beta) for every grid cell, sorted by n then beta index."""
        return [(n, bi, b) for n in sorted(self.n_values) for bi, b in enumerate(self.beta_values)]


NETWORK_KEYS = {f.name for f in fields(NetworkConfig)}
SWEEP_KEYS = {f.name for f in fields(SweepConfig)} - {"base"}


def parse_grid(text: str, cast=float) -> Tuple[Any, ...]:
    """``a,b,c`` list or inclusive ``start:stop:step`` range."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ConfigError(f"range step must be positive, got {text!r}")
        count = int(round((stop - start) / step)) + 1
        values = [round(start + k * step, 10) for k in range(count)]
        values = [v for v in values if v <= stop + 1e-9]
    else:
        values = [float(p) for p in text.split(",") if p.strip()]
    if cast is int:
        if any(v != int(v) for v in values):
            raise ConfigError(f"integer grid expected, got {text!r}")
        return tuple(int(v) for v in values)
    return tuple(values)


def read_config_file(path: str | Path) -> Dict[str, str]:
    """Parse a UTF-8 ``key=value`` file; ``#`` starts a comment; unknown keys fail."""
    out: Dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in NETWORK_KEYS | SWEEP_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


_NETWORK_CASTS = {
    "n": int,
    "seed": int,
    "exchange_mode": str,
}
_SWEEP_CASTS = {
    "n_values": lambda v: parse_grid(v, int),
    "beta_values": parse_grid,
    "trials": int,
    "max_nodes": int,
    "workers": int,
    "order": str,
    "out": str,
    "format": str,
    "emit_plot": str,
}


def build_sweep_config(values: Dict[str, Any]) -> SweepConfig:
    """SweepConfig from a flat mapping of raw (string or typed) values."""
    net: Dict[str, Any] = {}
    sweep: Dict[str, Any] = {}
    for key, value in values.items():
        if value is None:
            continue
        try:
            if key in NETWORK_KEYS:
                net[key] = _NETWORK_CASTS.get(key, float)(value) if isinstance(value, str) else value
            elif key in SWEEP_KEYS:
                sweep[key] = _SWEEP_CASTS[key](value) if isinstance(value, str) else value
            else:
                raise ConfigError(f"unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad value for {key}: {value!r}") from exc
    base = NetworkConfig(**net)
    sweep.setdefault("n_values", (base.n,) if "n" in net else DEFAULT_N_VALUES)
    sweep.setdefault("beta_values", (base.beta,) if "beta" in net else DEFAULT_BETA_VALUES)
    try:
        return SweepConfig(base=base, **sweep)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
