"""Deterministic SVG 1.1 rendering of trajectory CSV files.

Input columns are (t, one column per coordinate, error); the output has
one polyline per coordinate plus a translucent error band around each,
with byte-identical output for identical input.
"""

from __future__ import annotations

import csv
from pathlib import Path

WIDTH, HEIGHT = 640.0, 400.0
MARGIN = 40.0
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def read_trajectory(csv_path) -> list[tuple[float, list[float], float]]:
    rows: list[tuple[float, list[float], float]] = []
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) < 3 or header[0] != "t" or header[-1] != "error":
            raise ValueError("trajectory CSV needs columns (t, coords..., error)")
        width = len(header)
        for line in reader:
            if not line:
                continue
            if len(line) != width:
                raise ValueError(f"ragged CSV row: {line!r}")
            values = [float(v) for v in line]
            rows.append((values[0], values[1:-1], values[-1]))
    return rows


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render(rows: list[tuple[float, list[float], float]]) -> str:
    if not rows:
        raise ValueError("empty trajectory: nothing to plot")
    ncoords = len(rows[0][1])
    t_lo, t_hi = min(r[0] for r in rows), max(r[0] for r in rows)
    if t_hi <= t_lo:
        t_hi = t_lo + 1.0
    v_lo = min(c - r[2] for r in rows for c in r[1])
    v_hi = max(c + r[2] for r in rows for c in r[1])
    if v_hi <= v_lo:
        v_hi = v_lo + 1.0

    def sx(t: float) -> float:
        return MARGIN + (t - t_lo) / (t_hi - t_lo) * (WIDTH - 2 * MARGIN)

    def sy(v: float) -> float:
        return HEIGHT - MARGIN - (v - v_lo) / (v_hi - v_lo) * (HEIGHT - 2 * MARGIN)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(WIDTH)}" height="{_fmt(HEIGHT)}" '
        f'viewBox="0 0 {_fmt(WIDTH)} {_fmt(HEIGHT)}">\n',
        f'<rect x="0" y="0" width="{_fmt(WIDTH)}" height="{_fmt(HEIGHT)}" fill="#ffffff"/>\n',
        f'<line x1="{_fmt(MARGIN)}" y1="{_fmt(HEIGHT - MARGIN)}" '
        f'x2="{_fmt(WIDTH - MARGIN)}" y2="{_fmt(HEIGHT - MARGIN)}" '
        'stroke="#000000" stroke-width="1"/>\n',
        f'<line x1="{_fmt(MARGIN)}" y1="{_fmt(MARGIN)}" '
        f'x2="{_fmt(MARGIN)}" y2="{_fmt(HEIGHT - MARGIN)}" '
        'stroke="#000000" stroke-width="1"/>\n',
    ]
    for k in range(ncoords):
        color = PALETTE[k % len(PALETTE)]
        upper = [(sx(r[0]), sy(r[1][k] + r[2])) for r in rows]
        lower = [(sx(r[0]), sy(r[1][k] - r[2])) for r in reversed(rows)]
        band = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in upper + lower)
        parts.append(
            f'<polygon points="{band}" fill="{color}" fill-opacity="0.15" stroke="none"/>\n'
        )
        line = " ".join(f"{_fmt(sx(r[0]))},{_fmt(sy(r[1][k]))}" for r in rows)
        parts.append(
            f'<polyline points="{line}" fill="none" stroke="{color}" stroke-width="1.5"/>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts)


def emit_plot(csv_path, svg_path) -> None:
    """Render a trajectory CSV to an SVG file (deterministic bytes)."""
    rows = read_trajectory(csv_path)
    Path(svg_path).write_text(render(rows), encoding="utf-8")
