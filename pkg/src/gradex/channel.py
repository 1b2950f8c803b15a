"""Link budget, single-slope path loss, SINR under TIN, and spectral efficiency.

All quantities are SI (watts, meters, Hz) internally; dB appears only at the
configuration boundary.  Rates are in bits per channel use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from gradex.config import NetworkConfig

Link = Tuple[int, int]


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0


@dataclass(frozen=True)
class LinkBudget:
    gamma: float  # SNR at 1 m, linear
    noise_watts: float
    power_watts: float


def noise_power(cfg: NetworkConfig) -> float:
    """Thermal noise power N in watts from the PSD (dBm/Hz) and bandwidth."""
    return dbm_to_watts(cfg.noise_psd_dbm_hz + 10.0 * math.log10(cfg.bandwidth_hz))


def snr_ref(cfg: NetworkConfig) -> float:
    """Reference SNR ``gamma = P G0 / N`` at 1 m."""
    return dbm_to_watts(cfg.power_dbm) * cfg.ref_gain / noise_power(cfg)


def link_budget(cfg: NetworkConfig) -> LinkBudget:
    return LinkBudget(
        gamma=snr_ref(cfg), noise_watts=noise_power(cfg), power_watts=dbm_to_watts(cfg.power_dbm)
    )


def channel_gain(d: float, cfg: NetworkConfig) -> float:
    """``G0 d^-alpha``; no near-field clamp, so d < 1 m yields gains above G0."""
    if not d > 0:
        raise ValueError(f"path loss undefined at distance {d}")
    return cfg.ref_gain * d ** (-cfg.alpha)


def _check_active_set(active: Sequence[Link]) -> None:
    nodes = [v for link in active for v in link]
    if len(nodes) != len(set(nodes)):
        raise ValueError("a node appears in more than one active link (half-duplex)")


def sinr(tx: int, rx: int, active: Sequence[Link], coords: np.ndarray, cfg: NetworkConfig) -> float:
    """SINR at ``rx`` for the link ``tx -> rx`` while every link in ``active`` transmits.

    Interference comes from every active transmitter other than ``tx`` and
    ``rx``; noise is normalized to 1 so powers are expressed via gamma.
    """
    active = [tuple(int(v) for v in link) for link in active]
    if (tx, rx) not in active:
        raise ValueError(f"link {tx}->{rx} is not in the active set")
    _check_active_set(active)
    coords = np.asarray(coords, dtype=float)
    gamma = snr_ref(cfg)
    d_sig = float(np.hypot(*(coords[tx] - coords[rx])))
    if d_sig == 0.0:
        raise ValueError(f"nodes {tx} and {rx} coincide")
    interference = 0.0
    for k, _ in active:
        if k in (tx, rx):
            continue
        d = float(np.hypot(*(coords[k] - coords[rx])))
        if d == 0.0:
            raise ValueError(f"interferer {k} coincides with receiver {rx}")
        interference += gamma * d ** (-cfg.alpha)
    return gamma * d_sig ** (-cfg.alpha) / (1.0 + interference)


def set_sinrs(links: np.ndarray, coords: np.ndarray, gamma: float, alpha: float) -> np.ndarray:
    """Vectorized SINR of every link in a simultaneously active set.

    ``links`` is (k, 2) of (tx, rx).  Each transmitter in the set is assumed to
    be distinct from every receiver (a proper independent set guarantees it).
    """
    links = np.asarray(links, dtype=np.int64).reshape(-1, 2)
    tx, rx = links[:, 0], links[:, 1]
    diff = coords[tx][None, :, :] - coords[rx][:, None, :]  # [receiver, transmitter]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    if np.any(dist == 0.0):
        raise ValueError("coincident transmitter/receiver positions in active set")
    power = gamma * dist ** (-alpha)
    signal = np.diagonal(power).copy()
    np.fill_diagonal(power, 0.0)
    return signal / (1.0 + power.sum(axis=1))


def link_rate(sinr_value):
    """``log2(1 + SINR)`` in bits per channel use; accepts scalars or arrays."""
    if np.any(np.asarray(sinr_value) < 0):
        raise ValueError("SINR must be non-negative")
    return np.log1p(sinr_value) / math.log(2.0)
