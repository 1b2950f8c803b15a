"""Closed-form latency, chromatic-number, edge-count and clique quantities.

Every quantity that can overflow for large n (products of large and small
powers of n) is assembled in the log domain.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from gradex.channel import snr_ref
from gradex.config import ConfigError, NetworkConfig
from gradex.geometry import comm_threshold, conf_threshold

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class BoundReport:
    chi_bound: float
    delta_bound: float
    delta_orderwise: float
    expected_edges: float
    clique_asymptote_comm: float
    clique_asymptote_conf: float

    def to_dict(self) -> dict:
        return asdict(self)


# --------------------------------------------------------------------------
# helper functions
# --------------------------------------------------------------------------


def helper_g(x, M):
    """``1 / log2(1 + M/x)``: inverse of the closed-form rate of an |S| = x set."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or M <= 0:
        raise ValueError("helper_g needs x > 0 and M > 0")
    out = _LN2 / np.log1p(M / x)
    return float(out) if out.ndim == 0 else out


def helper_h(y):
    """``ln(1+y) - 2y/(2+y)``, non-negative for y >= 0.

    Below y = 1e-3 the two terms cancel to ~y^3/12, so a series is used there.
    """
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError("helper_h needs y >= 0")
    direct = np.log1p(y) - 2.0 * y / (2.0 + y)
    series = y**3 / 12.0 - y**4 / 8.0 + 11.0 * y**5 / 80.0
    out = np.where(y < 1e-3, series, direct)
    return float(out) if out.ndim == 0 else out


def helper_s(x, C):
    """``x / log2(1 + C x)``; increasing in x for every C > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or C <= 0:
        raise ValueError("helper_s needs x > 0 and C > 0")
    cx = np.exp(np.log(C) + np.log(x))
    out = x * _LN2 / np.log1p(cx)
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# raw-parameter forms
# --------------------------------------------------------------------------


def chromatic_bound(gamma: float, alpha: float, radius: float, n: float, beta: float) -> float:
    """``1 + (2 gamma^(1/alpha) / R) n^(2 - 3 beta)``."""
    log_term = math.log(2.0) + math.log(gamma) / alpha - math.log(radius) + (2.0 - 3.0 * beta) * math.log(n)
    return 1.0 + math.exp(log_term)


def rate_constant(gamma: float, alpha: float, radius: float, n: float, beta: float) -> float:
    """``C = 2 sqrt(gamma) R^(-alpha/2) n^(alpha beta/2 + 2 beta - 2)``."""
    log_c = (
        math.log(2.0)
        + 0.5 * math.log(gamma)
        - 0.5 * alpha * math.log(radius)
        + (alpha * beta / 2.0 + 2.0 * beta - 2.0) * math.log(n)
    )
    return math.exp(log_c)


def orderwise(n: float, beta: float) -> float:
    """``n^(2 - 3 beta) / (beta ln n)``; natural logarithm."""
    if n < 2:
        raise ValueError("orderwise scaling needs n >= 2")
    return math.exp((2.0 - 3.0 * beta) * math.log(n)) / (beta * math.log(n))


def clique_asymptote(n: float, r: float, R: float) -> float:
    """Asymptotic clique number of a disk RGG: ``(pi / 4) sigma n r^2`` with sigma = 1/(pi R^2)."""
    if r <= 0 or R <= 0:
        raise ValueError("r and R must be positive")
    return n * r * r / (4.0 * R * R)


def disk_pair_cdf(r: float, R: float) -> float:
    """P(|X - Y| <= r) for X, Y independent uniform on a disk of radius R.

    Unlike the ``(r/R)^2`` small-r limit this includes the boundary deficit.
    """
    t = min(r / (2.0 * R), 1.0)
    if t <= 0:
        return 0.0
    root = math.sqrt(1.0 - t * t)
    return (2.0 / math.pi) * (
        4.0 * t * t * math.acos(t) + math.asin(t) - t * (1.0 + 2.0 * t * t) * root
    )


# --------------------------------------------------------------------------
# config forms
# --------------------------------------------------------------------------


def chromatic_upper_bound(cfg: NetworkConfig) -> float:
    return chromatic_bound(snr_ref(cfg), cfg.alpha, cfg.radius, cfg.n, cfg.beta)


def jensen_latency_bound(chi: float, cfg: NetworkConfig) -> float:
    """Latency bound for a coloring with ``chi`` colors: ``s(chi)`` with the network's C."""
    if chi < 1:
        raise ValueError("chi must be >= 1")
    return helper_s(chi, rate_constant(snr_ref(cfg), cfg.alpha, cfg.radius, cfg.n, cfg.beta))


def theorem_bound(cfg: NetworkConfig) -> float:
    return jensen_latency_bound(chromatic_upper_bound(cfg), cfg)


def orderwise_bound(cfg: NetworkConfig) -> float:
    return orderwise(cfg.n, cfg.beta)


def expected_edge_count(cfg: NetworkConfig) -> float:
    """Asymptotic edge count ``n^2 (D_comm / R)^2 / 2``."""
    return 0.5 * cfg.n**2 * (comm_threshold(cfg) / cfg.radius) ** 2


def expected_edge_count_finite(cfg: NetworkConfig) -> float:
    """Exact mean edge count on the disk, boundary deficit included."""
    return 0.5 * cfg.n * (cfg.n - 1) * disk_pair_cdf(comm_threshold(cfg), cfg.radius)


def clique_regime_check(cfg: NetworkConfig) -> None:
    """Refuse parameters outside the dense-clique regime ``ln n / (n r^2) -> 0``.

    With r = 2 D_comm the normalized ``n r^2`` grows like ``n^(1 - 2 beta)``,
    with r = 2 D_conf like ``n^(1 - beta)``; both exponents must be positive.
    """
    for name, exponent in (("2*D_comm", 1.0 - 2.0 * cfg.beta), ("2*D_conf", 1.0 - cfg.beta)):
        if exponent <= 0.0:
            raise ConfigError(f"clique asymptote undefined at r={name}: n r^2 exponent {exponent} <= 0")


def bound_report(cfg: NetworkConfig) -> BoundReport:
    clique_regime_check(cfg)
    chi = chromatic_upper_bound(cfg)
    return BoundReport(
        chi_bound=chi,
        delta_bound=jensen_latency_bound(chi, cfg),
        delta_orderwise=orderwise_bound(cfg),
        expected_edges=expected_edge_count(cfg),
        clique_asymptote_comm=clique_asymptote(cfg.n, 2.0 * comm_threshold(cfg), cfg.radius),
        clique_asymptote_conf=clique_asymptote(cfg.n, 2.0 * conf_threshold(cfg), cfg.radius),
    )
