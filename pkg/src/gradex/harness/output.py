"""CSV / JSON / SVG emission.  Every artifact is a pure function of the report."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from gradex.harness.trial import BoundRow, SweepReport, TrialResult

Rows = Sequence[Union[TrialResult, BoundRow]]

_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
)


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if value is None:
        return ""
    return format(float(value), ".9g")


def rows_to_csv(rows: Rows, header: Sequence[str], include_timing: bool = False) -> str:
    """Comma-separated, 9 significant digits, LF endings, header always present.

    ``wall_seconds`` is left blank unless ``include_timing`` so that repeated
    runs produce identical bytes.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        d = row.to_dict()
        if "wall_seconds" in d and not include_timing:
            d["wall_seconds"] = None
        writer.writerow([format_value(d[h]) for h in header])
    return buf.getvalue()


def _parse_cell(name: str, text: str, types: Dict[str, type]):
    kind = types[name]
    if text == "":
        return None
    if kind is bool:
        return text == "true"
    if kind is int:
        return int(text)
    return float(text)


def parse_trial_csv(text: str) -> List[dict]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != TrialResult.field_names():
        raise ValueError("CSV header does not match the TrialResult schema")
    kinds = {"int": int, "float": float, "bool": bool}
    types = {f.name: kinds[str(f.type)] for f in fields(TrialResult)}
    return [{h: _parse_cell(h, c, types) for h, c in zip(header, line)} for line in reader]


def report_to_json(report: SweepReport, include_timing: bool = False) -> str:
    rows = []
    for r in report.rows:
        d = r.to_dict()
        if not include_timing:
            d["wall_seconds"] = None
        rows.append(d)
    doc = {
        "config": report.config,
        "rows": rows,
        "aggregates": report.aggregates(),
        "failures": report.failures,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def bounds_to_json(rows: Sequence[BoundRow]) -> str:
    return json.dumps([r.to_dict() for r in rows], indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# SVG
# --------------------------------------------------------------------------


def _series_from(report_or_rows) -> Tuple[Dict[float, List[Tuple[int, float]]], Dict[float, List[Tuple[int, float]]]]:
    bound: Dict[float, Dict[int, float]] = {}
    exact: Dict[float, Dict[int, List[float]]] = {}
    rows = report_or_rows.rows if isinstance(report_or_rows, SweepReport) else report_or_rows
    for r in rows:
        bound.setdefault(r.beta, {})[r.n] = r.delta_bound
        if isinstance(r, TrialResult):
            exact.setdefault(r.beta, {}).setdefault(r.n, []).append(r.delta_exact)
    b = {beta: sorted(v.items()) for beta, v in sorted(bound.items())}
    e = {beta: sorted((n, math.fsum(vals) / len(vals)) for n, vals in v.items())
         for beta, v in sorted(exact.items())}
    return b, e


def render_svg(report_or_rows, width: int = 720, height: int = 440) -> str:
    """Line chart of the latency bound (solid) and mean empirical latency (dashed) vs n, log y."""
    bound, exact = _series_from(report_or_rows)
    left, right, top, bottom = 80, 150, 30, 60
    pw, ph = width - left - right, height - top - bottom
    points = [p for s in list(bound.values()) + list(exact.values()) for p in s if p[1] > 0]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if not points:
        out.append("</svg>")
        return "\n".join(out) + "\n"
    xs = [p[0] for p in points]
    ys = [math.log10(p[1]) for p in points]
    x0, x1 = min(xs), max(xs)
    y0, y1 = math.floor(min(ys)), math.ceil(max(ys))
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y1 = y0 + 1

    def sx(x: float) -> float:
        return left + (x - x0) / (x1 - x0) * pw

    def sy(v: float) -> float:
        return top + ph - (math.log10(v) - y0) / (y1 - y0) * ph

    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for e in range(y0, y1 + 1):
        y = top + ph - (e - y0) / (y1 - y0) * ph
        out.append(f'<line x1="{left - 4}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end">1e{e}</text>')
    for x in sorted(set(xs)):
        out.append(f'<line x1="{sx(x):.2f}" y1="{top + ph}" x2="{sx(x):.2f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{sx(x):.2f}" y="{top + ph + 18}" text-anchor="middle">{x}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 15}" text-anchor="middle">number of nodes n</text>')
    out.append(f'<text x="18" y="{top + ph / 2:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {top + ph / 2:.2f})">normalized latency (channel uses / bit)</text>')

    for k, (beta, series) in enumerate(bound.items()):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{sx(n):.2f},{sy(v):.2f}" for n, v in series if v > 0)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        if beta in exact:
            pts = " ".join(f"{sx(n):.2f},{sy(v):.2f}" for n, v in exact[beta] if v > 0)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                       f'stroke-dasharray="5,3" points="{pts}"/>')
        ly = top + 14 + 16 * k
        out.append(f'<line x1="{left + pw + 12}" y1="{ly - 4}" x2="{left + pw + 36}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 42}" y="{ly}">beta={beta:g}</text>')
    return "\n".join(out) + "\n</svg>\n"


def emit_outputs(
    report_or_rows,
    out: Optional[str] = None,
    fmt: str = "csv",
    plot: Optional[str] = None,
    include_timing: bool = False,
) -> str:
    """Serialize and write; returns the serialized table (also when ``out`` is None)."""
    if isinstance(report_or_rows, SweepReport):
        text = (rows_to_csv(report_or_rows.rows, TrialResult.field_names(), include_timing)
                if fmt == "csv" else report_to_json(report_or_rows, include_timing))
    else:
        text = (rows_to_csv(report_or_rows, BoundRow.field_names())
                if fmt == "csv" else bounds_to_json(report_or_rows))
    for path, payload in ((out, text), (plot, render_svg(report_or_rows) if plot else None)):
        if path is None:
            continue
        try:
            Path(path).write_text(payload, encoding="utf-8", newline="\n")
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return text
