"""Deterministic SVG line chart of ``1/lambda1`` against the pinned fraction ``p``."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .runner import RESULT_COLUMNS

WIDTH, HEIGHT = 640, 420
MARGIN = {"left": 70, "right": 150, "top": 30, "bottom": 55}
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"]


class PlotInputError(ValueError):
    pass


def read_results(path) -> dict:
    """``{label: [(p, mean 1/lambda1), ...]}`` averaged over seeds.

    Curves are keyed by strategy, with the backend appended when a file mixes backends.
    """
    acc = {}
    backends = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in ("strategy", "backend", "p", "inv_lambda1") if c not in (reader.fieldnames or [])]
        if missing:
            raise PlotInputError(f"row 1: header lacks columns {missing}; expected {RESULT_COLUMNS}")
        for rowno, row in enumerate(reader, start=2):
            try:
                p = float(row["p"])
                y = float(row["inv_lambda1"])
            except (TypeError, ValueError):
                raise PlotInputError(f"row {rowno}: non-numeric p or inv_lambda1") from None
            if not row["strategy"]:
                raise PlotInputError(f"row {rowno}: empty strategy")
            backends.add(row["backend"])
            acc.setdefault((row["strategy"], row["backend"]), {}).setdefault(p, []).append(y)
    if not acc:
        raise PlotInputError("no data rows")
    curves = {}
    for (s, b), pts in acc.items():
        label = s if len(backends) == 1 else f"{s} ({b})"
        curves[label] = [(p, float(np.mean(v))) for p, v in sorted(pts.items())]
    return curves


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.floor(lo / step) * step
    return [start + i * step for i in range(int(math.ceil((hi - start) / step)) + 1)]


def render_svg(curves: dict, title: str = "") -> str:
    xs = [p for pts in curves.values() for p, _ in pts]
    ys = [y for pts in curves.values() for _, y in pts]
    xt = _ticks(0.0, max(xs))
    yt = _ticks(min(0.0, min(ys)), max(ys))
    x0, x1, y0, y1 = xt[0], xt[-1], yt[0], yt[-1]
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(x):
        return MARGIN["left"] + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MARGIN["top"] + ph - (y - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    if title:
        out.append(f'<text x="{MARGIN["left"]}" y="18" font-size="14">{escape(title)}</text>')
    bottom = MARGIN["top"] + ph
    for t in xt:
        out.append(f'<line x1="{sx(t):.2f}" y1="{bottom}" x2="{sx(t):.2f}" y2="{bottom + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{bottom + 18}" text-anchor="middle">{t:.3g}</text>')
    for t in yt:
        out.append(f'<line x1="{MARGIN["left"] - 5}" y1="{sy(t):.2f}" x2="{MARGIN["left"]}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(f'<line x1="{MARGIN["left"]}" y1="{sy(t):.2f}" x2="{MARGIN["left"] + pw}" y2="{sy(t):.2f}" '
                   f'stroke="#dddddd"/>')
        out.append(f'<text x="{MARGIN["left"] - 8}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:.3g}</text>')
    out.append(f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" '
               f'fill="none" stroke="black"/>')
    out.append(f'<text x="{MARGIN["left"] + pw / 2:.2f}" y="{HEIGHT - 12}" text-anchor="middle">'
               f'pinned fraction p</text>')
    out.append(f'<text transform="translate(18 {MARGIN["top"] + ph / 2:.2f}) rotate(-90)" '
               f'text-anchor="middle">1/λ₁</text>')
    for i, label in enumerate(sorted(curves)):
        color = PALETTE[i % len(PALETTE)]
        pts = curves[label]
        if len(pts) == 1:
            (x, y), = pts
            out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4" fill="{color}"/>')
        else:
            path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>')
        ly = MARGIN["top"] + 10 + 18 * i
        lx = WIDTH - MARGIN["right"] + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_plot(results_csv, out_svg, title: str = "") -> Path:
    svg = render_svg(read_results(results_csv), title)
    out_svg = Path(out_svg)
    out_svg.parent.mkdir(parents=True, exist_ok=True)
    out_svg.write_text(svg, encoding="utf-8")
    return out_svg
