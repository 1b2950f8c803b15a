"""Fast invariant suites behind ``gradex check``.

Each check returns (name, passed, detail).  The suites are small enough to
run in a few seconds; the exhaustive versions live in the test suite.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, List, Tuple

import numpy as np

from gradex import bounds, geometry, scheduler
from gradex.channel import snr_ref
from gradex.config import NetworkConfig

Check = Tuple[str, bool, str]


def _helpers() -> List[Check]:
    y = np.logspace(-6, 6, 10_000)
    h_ok = bool(np.all(bounds.helper_h(y) >= 0.0))

    worst_g = -math.inf
    for M in (1.0, 1e2, 1e4):
        x = np.logspace(-2, 4, 600)
        step = 1e-3 * x
        d2 = bounds.helper_g(x + step, M) - 2 * bounds.helper_g(x, M) + bounds.helper_g(x - step, M)
        worst_g = max(worst_g, float(d2.max()))

    s_ok = True
    for C in (1e-4, 1.0, 1e4):
        s = bounds.helper_s(np.logspace(-2, 6, 2000), C)
        s_ok &= bool(np.all(np.diff(s) > 0))

    worst_rel = 0.0
    for n in (1000, 1500, 2000):
        for beta in (0.1, 0.3, 0.45):
            cfg = NetworkConfig(n=n, beta=beta)
            c = bounds.rate_constant(snr_ref(cfg), cfg.alpha, cfg.radius, cfg.n, cfg.beta)
            a = bounds.theorem_bound(cfg)
            b = bounds.helper_s(bounds.chromatic_upper_bound(cfg), c)
            worst_rel = max(worst_rel, abs(a - b) / b)
    return [
        ("h(y) >= 0 on log grid", h_ok, ""),
        ("g concave (2nd differences <= 1e-9)", worst_g <= 1e-9, f"max={worst_g:.3g}"),
        ("s strictly increasing", s_ok, ""),
        ("latency bound == s(chi_bound, C)", worst_rel <= 1e-12, f"rel={worst_rel:.3g}"),
    ]


def _graphs() -> List[Check]:
    grid_ok = True
    conf_ok = True
    for seed in range(5):
        pos = geometry.sample_disk(300, 100.0, seed)
        d = 12.0
        c = pos.coords
        dist = np.hypot(*(c[:, None, :] - c[None, :, :]).transpose(2, 0, 1))
        ii, jj = np.nonzero(np.triu(dist <= d, 1))
        grid_ok &= np.array_equal(geometry.close_pairs(c, d), np.column_stack((ii, jj)))

        small = geometry.sample_disk(40, 100.0, 100 + seed)
        comm = geometry.build_comm_graph(small, 25.0)
        conf = geometry.build_conflict_graph(comm, small, 30.0)
        dd = np.hypot(*(small.coords[:, None, :] - small.coords[None, :, :]).transpose(2, 0, 1))
        e = comm.edges
        for u, v in itertools.combinations(range(comm.num_edges), 2):
            expect = min(dd[e[u, 0], e[v, 0]], dd[e[u, 0], e[v, 1]],
                         dd[e[u, 1], e[v, 0]], dd[e[u, 1], e[v, 1]]) <= 30.0
            if conf.has_edge(u, v) != expect:
                conf_ok = False
                break
    return [("grid neighbor search == brute force", bool(grid_ok), ""),
            ("conflict graph == min-of-four rule", conf_ok, "")]


def _schedules() -> List[Check]:
    proper = greedy = tin = duplex = rates = True
    for seed in range(5):
        cfg = NetworkConfig(n=300, beta=0.3, seed=seed)
        pos = geometry.place_nodes(cfg)
        comm = geometry.build_comm_graph(pos, geometry.comm_threshold(cfg))
        conf = geometry.build_conflict_graph(comm, pos, geometry.conf_threshold(cfg))
        for policy in scheduler.OrderPolicy:
            sched = scheduler.greedy_color(conf, policy)
            proper &= scheduler.is_proper(sched, conf)
            greedy &= sched.num_colors <= 1 + conf.max_degree
        sched = scheduler.orient_edges(scheduler.greedy_color(conf), comm.edges)
        for links in sched.directions:
            tin &= scheduler.tin_condition_check(links, pos.coords, cfg).satisfied
            duplex &= scheduler.half_duplex_ok(links)
            exact = scheduler.symmetric_rate_exact(links, pos.coords, cfg)
            rates &= exact >= scheduler.distance_rate_bound(len(links), cfg)
            bound, valid = scheduler.symmetric_rate_lemma2(len(links), cfg)
            rates &= (not valid) or exact > bound
    return [
        ("greedy coloring proper", bool(proper), ""),
        ("colors <= 1 + max conflict degree", bool(greedy), ""),
        ("TIN condition on every color", bool(tin), ""),
        ("half-duplex within every color", bool(duplex), ""),
        ("exact rate >= closed-form bounds", bool(rates), ""),
    ]


def _determinism() -> List[Check]:
    cfg = NetworkConfig(n=200, beta=0.3, seed=7)
    digests = []
    for _ in range(2):
        pos = geometry.place_nodes(cfg)
        comm = geometry.build_comm_graph(pos, geometry.comm_threshold(cfg))
        conf = geometry.build_conflict_graph(comm, pos, geometry.conf_threshold(cfg))
        digests.append((geometry.topology_csv(pos, comm), conf.digest()))
    return [("repeat runs identical", digests[0] == digests[1], "")]


SUITES: List[Callable[[], List[Check]]] = [_helpers, _graphs, _schedules, _determinism]


def run_checks(echo: Callable[[str], None] = print) -> bool:
    ok = True
    for suite in SUITES:
        for name, passed, detail in suite():
            ok &= passed
            echo(f"{'PASS' if passed else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
    return ok
