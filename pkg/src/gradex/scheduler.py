"""Time-sharing schedules from greedy coloring of the conflict graph.

Each color class is an independent set of communication links that transmit
together in one slot; the normalized latency is the sum over slots of the
inverse symmetric rate of the slot.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from gradex.channel import link_rate, set_sinrs, snr_ref
from gradex.config import ExchangeMode, NetworkConfig
from gradex.geometry import ConflictGraph, comm_threshold, conf_threshold

_LN2 = math.log(2.0)
_COLOR_BLOCK = 256


class OrderPolicy(str, enum.Enum):
    INPUT = "input"
    DEGREE = "degree"


@dataclass
class Schedule:
    """Proper coloring of a conflict graph.

    ``sets[k]`` lists the conflict vertices (communication-edge indices) of
    color k in ascending order.  ``directions[k]`` holds the matching
    (tx, rx) pairs once :func:`orient_edges` has been applied.
    """

    color_of: np.ndarray
    sets: List[np.ndarray]
    directions: Optional[List[np.ndarray]] = None
    mode: ExchangeMode = ExchangeMode.EDGE

    @property
    def num_colors(self) -> int:
        return len(self.sets)

    def to_json(self) -> str:
        doc = {
            "colors": [s.tolist() for s in self.sets],
            "directions": [d.tolist() for d in self.directions] if self.directions is not None else None,
            "mode": self.mode.value,
        }
        return json.dumps(doc, separators=(",", ":"))


@dataclass(frozen=True)
class TinReport:
    min_snr: float
    max_inr: float
    satisfied: bool


@dataclass
class LatencyResult:
    delta_exact: float
    delta_lemma2: float
    # (|S_k|, exact symmetric rate, closed-form lower bound) per color
    per_set_rates: List[Tuple[int, float, float]] = field(default_factory=list)
    bandwidth_hz: float = 1.0
    lemma2_valid: bool = True

    @property
    def seconds_per_bit(self) -> float:
        return self.delta_exact / self.bandwidth_hz


# --------------------------------------------------------------------------
# coloring
# --------------------------------------------------------------------------


def vertex_order(conf: ConflictGraph, policy: OrderPolicy | str = OrderPolicy.DEGREE) -> np.ndarray:
    policy = OrderPolicy(policy)
    m = conf.num_vertices
    if policy is OrderPolicy.INPUT:
        return np.arange(m)
    # Welsh-Powell: largest degree first, ties by index
    return np.lexsort((np.arange(m), -conf.degrees))


def greedy_color(conf: ConflictGraph, order_policy: OrderPolicy | str = OrderPolicy.DEGREE) -> Schedule:
    """Smallest-available-color greedy coloring in the chosen vertex order."""
    m = conf.num_vertices
    color_of = np.full(m, -1, dtype=np.int64)
    order = vertex_order(conf, order_policy)
    for start in range(0, m, _COLOR_BLOCK):
        block = order[start : start + _COLOR_BLOCK]
        rows = conf.rows(block)
        for v, row in zip(block.tolist(), rows):
            taken = color_of[row]
            taken = taken[taken >= 0]
            if taken.size == 0:
                color_of[v] = 0
                continue
            used = np.zeros(int(taken.max()) + 2, dtype=bool)
            used[taken] = True
            color_of[v] = int(np.argmin(used))
    num_colors = int(color_of.max()) + 1 if m else 0
    by_color = np.argsort(color_of, kind="stable")
    bounds = np.searchsorted(color_of[by_color], np.arange(num_colors + 1))
    sets = [np.sort(by_color[bounds[k] : bounds[k + 1]]) for k in range(num_colors)]
    return Schedule(color_of=color_of, sets=sets)


def is_proper(sched: Schedule, conf: ConflictGraph) -> bool:
    """No two vertices of one color are adjacent, and colors partition the vertices."""
    seen = np.zeros(conf.num_vertices, dtype=np.int64)
    for s in sched.sets:
        seen[s] += 1
        if s.size > 1 and conf.rows(s)[:, s].any():
            return False
    return bool(np.all(seen == 1))


def orient_edges(
    sched: Schedule, edges: np.ndarray, mode: ExchangeMode | str = ExchangeMode.EDGE
) -> Schedule:
    """Attach a transmit direction to every scheduled link.

    Links always go lower index -> higher index in the first (or only) half
    slot; in DIRECTION mode a second half slot carries the reverse direction.
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    directions = [np.sort(edges[s], axis=1) for s in sched.sets]
    return replace(sched, directions=directions, mode=ExchangeMode(mode))


# --------------------------------------------------------------------------
# rates
# --------------------------------------------------------------------------


def symmetric_rate_exact(links: np.ndarray, coords: np.ndarray, cfg: NetworkConfig) -> float:
    """Rate all links of a simultaneously active set achieve: min of log2(1+SINR)."""
    links = np.asarray(links, dtype=np.int64).reshape(-1, 2)
    if links.shape[0] == 0:
        raise ValueError("empty independent set")
    sinrs = set_sinrs(links, np.asarray(coords, dtype=float), snr_ref(cfg), cfg.alpha)
    return float(link_rate(sinrs).min())


def distance_rate_bound(set_size: int, cfg: NetworkConfig) -> float:
    """Rate floor from worst-case geometry alone.

    Signal at D_comm and each of the ``set_size - 1`` interferers at D_conf:
    ``log2(1 + g D_comm^-a / (1 + (|S|-1) g D_conf^-a))``.
    """
    gamma = snr_ref(cfg)
    snr_min = gamma * comm_threshold(cfg) ** (-cfg.alpha)
    inr_max = gamma * conf_threshold(cfg) ** (-cfg.alpha)
    return float(np.log1p(snr_min / (1.0 + (set_size - 1) * inr_max)) / _LN2)


def symmetric_rate_lemma2(set_size: int, cfg: NetworkConfig) -> Tuple[float, bool]:
    """Closed-form symmetric-rate bound ``log2(1 + sqrt(g D_comm^-a) / |S|)``.

    The flag reports whether ``g D_conf^-a >= 1``; only then is the bound
    implied by :func:`distance_rate_bound` at finite n.
    """
    if set_size < 1:
        raise ValueError("set_size must be >= 1")
    gamma = snr_ref(cfg)
    m = math.sqrt(gamma * comm_threshold(cfg) ** (-cfg.alpha))
    valid = gamma * conf_threshold(cfg) ** (-cfg.alpha) >= 1.0
    return math.log1p(m / set_size) / _LN2, valid


def tin_condition_check(links: np.ndarray, coords: np.ndarray, cfg: NetworkConfig) -> TinReport:
    """Check ``max INR <= sqrt(min SNR)`` over one set of concurrent links."""
    links = np.asarray(links, dtype=np.int64).reshape(-1, 2)
    if links.shape[0] == 0:
        return TinReport(min_snr=math.inf, max_inr=0.0, satisfied=True)
    coords = np.asarray(coords, dtype=float)
    gamma = snr_ref(cfg)
    tx, rx = links[:, 0], links[:, 1]
    diff = coords[tx][None, :, :] - coords[rx][:, None, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    power = gamma * dist ** (-cfg.alpha)
    min_snr = float(np.diagonal(power).min())
    np.fill_diagonal(power, 0.0)
    max_inr = float(power.max())
    return TinReport(min_snr=min_snr, max_inr=max_inr, satisfied=max_inr <= math.sqrt(min_snr))


def half_duplex_ok(links: np.ndarray) -> bool:
    flat = np.asarray(links).ravel()
    return np.unique(flat).size == flat.size


# --------------------------------------------------------------------------
# latency
# --------------------------------------------------------------------------


def _halves(sched: Schedule, k: int) -> Sequence[np.ndarray]:
    fwd = sched.directions[k]
    if sched.mode is ExchangeMode.DIRECTION:
        return (fwd, fwd[:, ::-1])
    return (fwd,)


def latency(sched: Schedule, coords: np.ndarray, cfg: NetworkConfig) -> LatencyResult:
    """Normalized gradient-exchange latency under time-sharing of the color classes.

    ``delta_exact`` sums ``1/R_sym`` of the exact SINR rates; ``delta_lemma2``
    sums the inverse closed-form rate bounds.  In DIRECTION mode every slot
    carries both halves, so each contributes the sum of two inverse rates.
    """
    if sched.directions is None:
        raise ValueError("schedule has no transmit directions; call orient_edges first")
    delta_exact = 0.0
    delta_lemma2 = 0.0
    per_set: List[Tuple[int, float, float]] = []
    all_valid = True
    for k, s in enumerate(sched.sets):
        size = int(s.size)
        bound, valid = symmetric_rate_lemma2(size, cfg)
        all_valid &= valid
        rates = [symmetric_rate_exact(links, coords, cfg) for links in _halves(sched, k)]
        if min(rates) <= 0.0:
            raise ValueError(f"color {k} has zero symmetric rate")
        delta_exact += sum(1.0 / r for r in rates)
        delta_lemma2 += len(rates) / bound
        per_set.append((size, min(rates), bound))
    return LatencyResult(
        delta_exact=delta_exact,
        delta_lemma2=delta_lemma2,
        per_set_rates=per_set,
        bandwidth_hz=cfg.bandwidth_hz,
        lemma2_valid=all_valid,
    )
