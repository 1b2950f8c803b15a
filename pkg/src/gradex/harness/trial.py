"""Seeded Monte-Carlo trials and (n, beta) sweeps."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, List, Optional, Tuple

from gradex import bounds, geometry, scheduler
from gradex.config import ConfigError, NetworkConfig
from gradex.geometry import NodePositions
from gradex.harness.config import SweepConfig
from gradex.scheduler import OrderPolicy

log = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1


class TrialError(RuntimeError):
    """A trial failed; the message names the cell and seed."""


def mix64(x: int) -> int:
    """SplitMix64 output function."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(base: int, n: int, beta_index: int, trial: int) -> int:
    return mix64((base ^ (n * 10**6 + beta_index * 10**3 + trial)) & _MASK64)


@dataclass
class TrialResult:
    n: int
    beta: float
    trial_index: int
    derived_seed: int
    num_edges: int
    connected: bool
    num_colors: int
    max_conflict_degree: int
    delta_exact: float
    delta_lemma2: float
    lemma2_valid: bool
    delta_bound: float
    delta_orderwise: float
    clique_est_comm: int
    tin_all_satisfied: bool
    wall_seconds: float

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    def to_dict(self) -> dict:
        return asdict(self)

    def sort_key(self) -> Tuple[int, float, int]:
        return (self.n, self.beta, self.trial_index)


@dataclass
class BoundRow:
    n: int
    beta: float
    chi_bound: float
    delta_bound: float
    delta_orderwise: float
    expected_edges: float
    clique_asymptote_comm: float
    clique_asymptote_conf: float

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SweepReport:
    rows: List[TrialResult] = field(default_factory=list)
    failures: List[dict] = field(default_factory=list)
    config: Optional[dict] = None

    def aggregates(self) -> List[dict]:
        """Mean/min/max of every numeric column per (n, beta) cell."""
        cells: Dict[Tuple[int, float], List[TrialResult]] = {}
        for row in sorted(self.rows, key=TrialResult.sort_key):
            cells.setdefault((row.n, row.beta), []).append(row)
        numeric = [
            "num_edges", "num_colors", "max_conflict_degree", "delta_exact",
            "delta_lemma2", "delta_bound", "delta_orderwise", "clique_est_comm",
        ]
        out = []
        for (n, beta), rows in cells.items():
            agg = {"n": n, "beta": beta, "trials": len(rows),
                   "connected_fraction": sum(r.connected for r in rows) / len(rows),
                   "tin_all_satisfied": all(r.tin_all_satisfied for r in rows)}
            for name in numeric:
                vals = [float(getattr(r, name)) for r in rows]
                agg[name] = {"mean": math.fsum(vals) / len(vals), "min": min(vals), "max": max(vals)}
            out.append(agg)
        return out


def run_trial(
    cfg: NetworkConfig,
    order: OrderPolicy | str = OrderPolicy.DEGREE,
    positions: Optional[NodePositions] = None,
    trial_index: int = 0,
) -> TrialResult:
    """Place -> communication graph -> conflict graph -> color -> latency -> bounds.

    ``positions`` overrides random placement (hand-built instances).
    A graph without communication edges has zero latency by convention.
    """
    t0 = time.perf_counter()
    try:
        pos = positions if positions is not None else geometry.place_nodes(cfg)
        d_comm = geometry.comm_threshold(cfg)
        comm = geometry.build_comm_graph(pos, d_comm)
        if geometry.short_edge_count(comm, pos):
            log.warning("n=%d seed=%d: communication edges shorter than 1 m; path loss unclamped",
                        cfg.n, cfg.seed)
        if geometry.connectivity_warning(cfg):
            log.info("n=%d beta=%g: expected degree below the connectivity regime", cfg.n, cfg.beta)
        conf = geometry.build_conflict_graph(comm, pos, geometry.conf_threshold(cfg))
        sched = scheduler.greedy_color(conf, order)
        sched = scheduler.orient_edges(sched, comm.edges, cfg.exchange_mode)
        lat = scheduler.latency(sched, pos.coords, cfg)
        tin_ok = all(
            scheduler.tin_condition_check(links, pos.coords, cfg).satisfied
            for links in sched.directions
        )
        _, lemma2_valid = scheduler.symmetric_rate_lemma2(1, cfg)
        report = bounds.bound_report(cfg)
        clique = geometry.clique_lower_bound(pos, 2.0 * d_comm)
    except ConfigError:
        raise
    except Exception as exc:
        raise TrialError(f"trial failed at n={cfg.n} beta={cfg.beta} seed={cfg.seed}: {exc}") from exc
    return TrialResult(
        n=cfg.n,
        beta=cfg.beta,
        trial_index=trial_index,
        derived_seed=cfg.seed,
        num_edges=comm.num_edges,
        connected=comm.num_edges > 0 and geometry.is_connected(comm),
        num_colors=sched.num_colors,
        max_conflict_degree=conf.max_degree,
        delta_exact=lat.delta_exact,
        delta_lemma2=lat.delta_lemma2,
        lemma2_valid=lemma2_valid,
        delta_bound=report.delta_bound,
        delta_orderwise=report.delta_orderwise,
        clique_est_comm=clique,
        tin_all_satisfied=tin_ok,
        wall_seconds=time.perf_counter() - t0,
    )


def _trial_task(args) -> Tuple[Optional[TrialResult], Optional[dict]]:
    cfg, order, trial = args
    try:
        return run_trial(cfg, order, trial_index=trial), None
    except Exception as exc:  # recorded per cell, the sweep continues
        return None, {"n": cfg.n, "beta": cfg.beta, "trial_index": trial,
                      "derived_seed": cfg.seed, "error": str(exc)}


def trial_configs(sweep: SweepConfig) -> List[Tuple[NetworkConfig, str, int]]:
    tasks = []
    for n, bi, beta in sweep.cells():
        for t in range(sweep.trials):
            seed = derive_seed(sweep.base.seed, n, bi, t)
            tasks.append((sweep.base.with_(n=n, beta=beta, seed=seed), sweep.order.value, t))
    return tasks


def run_sweep(sweep: SweepConfig) -> SweepReport:
    """Run every trial of every cell; rows come back sorted by (n, beta, trial)."""
    too_big = [n for n in sweep.n_values if n > sweep.max_nodes]
    if too_big:
        raise ConfigError(f"n={too_big} exceeds the empirical budget max_nodes={sweep.max_nodes}")
    tasks = trial_configs(sweep)
    if sweep.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=sweep.workers) as pool:
            results = list(pool.map(_trial_task, tasks))
    else:
        results = [_trial_task(t) for t in tasks]
    rows = sorted((r for r, _ in results if r is not None), key=TrialResult.sort_key)
    failures = sorted((f for _, f in results if f is not None),
                      key=lambda f: (f["n"], f["beta"], f["trial_index"]))
    for f in failures:
        log.error("%s", f["error"])
    return SweepReport(rows=rows, failures=failures, config=sweep_summary(sweep))


def run_bound_sweep(sweep: SweepConfig) -> List[BoundRow]:
    rows = []
    for n, _, beta in sweep.cells():
        rep = bounds.bound_report(sweep.base.with_(n=n, beta=beta))
        rows.append(BoundRow(n=n, beta=beta, **rep.to_dict()))
    return rows


def sweep_summary(sweep: SweepConfig) -> dict:
    return {
        "base": sweep.base.to_dict(),
        "n_values": list(sweep.n_values),
        "beta_values": list(sweep.beta_values),
        "trials": sweep.trials,
        "order": sweep.order.value,
    }
