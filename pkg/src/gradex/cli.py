"""Command-line entry point: ``gradex {bound,simulate,sweep,check}``.

Exit codes: 0 success, 1 invalid configuration, 2 runtime failure,
3 invariant-suite failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from typing import Any, Dict, List, Optional

from gradex.config import ConfigError
from gradex.harness.config import build_sweep_config, read_config_file

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_CHECK = 0, 1, 2, 3

# CLI flag -> config key
_FLAG_KEYS = {
    "radius_m": "radius",
    "power_dbm": "power_dbm",
    "noise_dbm_hz": "noise_psd_dbm_hz",
    "bandwidth_hz": "bandwidth_hz",
    "pathloss_exp": "alpha",
    "ref_gain": "ref_gain",
    "seed": "seed",
    "trials": "trials",
    "exchange_mode": "exchange_mode",
    "order": "order",
    "out": "out",
    "format": "format",
    "emit_plot": "emit_plot",
    "workers": "workers",
    "max_nodes": "max_nodes",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, grids: bool) -> None:
    if grids:
        p.add_argument("--nodes", help="n grid: comma list or start:stop:step (inclusive)")
        p.add_argument("--beta", help="beta grid: comma list or start:stop:step (inclusive)")
    else:
        p.add_argument("--nodes", type=int, help="number of nodes n")
        p.add_argument("--beta", type=float, help="density exponent beta in (0, 1/2)")
    p.add_argument("--radius-m", type=float)
    p.add_argument("--power-dbm", type=float)
    p.add_argument("--noise-dbm-hz", type=float)
    p.add_argument("--bandwidth-hz", type=float)
    p.add_argument("--pathloss-exp", type=float)
    p.add_argument("--ref-gain", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--exchange-mode", choices=["edge", "direction"])
    p.add_argument("--order", choices=["input", "degree"])
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--config", help="flat key=value config file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gradex", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="closed-form bounds for one (n, beta)")
    _common(p, grids=False)

    p = sub.add_parser("simulate", help="Monte-Carlo trials for one (n, beta) cell")
    _common(p, grids=False)
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--timing", action="store_true", help="record wall_seconds in outputs")

    p = sub.add_parser("sweep", help="(n, beta) grid sweep")
    _common(p, grids=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--bound-only", action="store_true", help="closed-form bounds only, no simulation")
    p.add_argument("--emit-plot", help="write an SVG chart to this path")
    p.add_argument("--timing", action="store_true", help="record wall_seconds in outputs")

    sub.add_parser("check", help="run the invariant suites")
    return parser


def _collect(args: argparse.Namespace) -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for flag, key in _FLAG_KEYS.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    if args.command == "sweep":
        if args.nodes is not None:
            values["n_values"] = args.nodes
        if args.beta is not None:
            values["beta_values"] = args.beta
    else:
        if args.nodes is not None:
            values["n"] = args.nodes
        if args.beta is not None:
            values["beta"] = args.beta
    return values


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.command == "check":
        from gradex.harness.checks import run_checks

        return EXIT_OK if run_checks() else EXIT_CHECK

    from gradex.harness.output import emit_outputs
    from gradex.harness.trial import run_bound_sweep, run_sweep

    try:
        values = _collect(args)
        if args.command != "sweep":
            for key in ("n_values", "beta_values"):
                if key in values:
                    raise ConfigError(f"{key} is only valid for the sweep command")
        sweep = build_sweep_config(values)
        if args.command != "sweep":
            sweep = replace(sweep, n_values=(sweep.base.n,), beta_values=(sweep.base.beta,))
    except (ConfigError, OSError) as exc:
        print(f"gradex: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    bound_only = args.command == "bound" or getattr(args, "bound_only", False)
    try:
        if bound_only:
            text = emit_outputs(run_bound_sweep(sweep), sweep.out, sweep.format, sweep.emit_plot)
            failures = []
        else:
            report = run_sweep(sweep)
            text = emit_outputs(report, sweep.out, sweep.format, sweep.emit_plot, args.timing)
            failures = report.failures
    except ConfigError as exc:
        print(f"gradex: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"gradex: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if sweep.out is None:
        sys.stdout.write(text)
    for f in failures:
        print(f"gradex: {f['error']}", file=sys.stderr)
    return EXIT_RUNTIME if failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
