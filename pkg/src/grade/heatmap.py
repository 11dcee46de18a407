"""Score heatmaps as CSV matrices and standalone SVG."""
from __future__ import annotations

import csv
import io
import math
from collections.abc import Sequence
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .errors import ValidationError
from .harness import DIMENSIONS, ScoreReport

# viridis anchor colors, evenly spaced over [0, 1]
_STOPS = [(68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37)]

CELL_W, CELL_H = 72, 40
MARGIN_L, MARGIN_T = 110, 50
BAR_W = 16


def color(value: float) -> str:
    v = min(1.0, max(0.0, value)) * (len(_STOPS) - 1)
    i = min(int(v), len(_STOPS) - 2)
    f = v - i
    rgb = [round(a + (b - a) * f) for a, b in zip(_STOPS[i], _STOPS[i + 1])]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _ordered(values: list) -> list:
    if all(isinstance(v, (int, float)) for v in values):
        return sorted(set(values))
    seen: list = []
    for v in values:
        if v not in seen:
            seen.append(v)
    return seen


def _fmt(v) -> str:
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return str(v)


@dataclass
class Heatmap:
    row_axis: str
    col_axis: str
    rows: list
    cols: list
    matrix: list[list[float]]
    title: str = ""

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"{self.row_axis}\\{self.col_axis}"] + [_fmt(c) for c in self.cols])
        for r, values in zip(self.rows, self.matrix):
            writer.writerow([_fmt(r)] + [repr(v) for v in values])
        return buf.getvalue()

    def to_svg(self) -> str:
        n_rows, n_cols = len(self.rows), len(self.cols)
        grid_w, grid_h = n_cols * CELL_W, n_rows * CELL_H
        bar_x = MARGIN_L + grid_w + 24
        width = bar_x + BAR_W + 50
        height = MARGIN_T + grid_h + 50
        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{max(height, MARGIN_T + 150)}" '
            f'font-family="sans-serif" font-size="12">',
            f'<text x="{MARGIN_L}" y="20" font-size="14">{escape(self.title)}</text>',
        ]
        for i, (r, values) in enumerate(zip(self.rows, self.matrix)):
            y = MARGIN_T + i * CELL_H
            out.append(
                f'<text x="{MARGIN_L - 8}" y="{y + CELL_H / 2 + 4}" text-anchor="end">'
                f"{escape(self.row_axis)}={escape(_fmt(r))}</text>"
            )
            for j, v in enumerate(values):
                x = MARGIN_L + j * CELL_W
                ink = "#000000" if v > 0.6 else "#ffffff"
                out.append(
                    f'<rect x="{x}" y="{y}" width="{CELL_W}" height="{CELL_H}" fill="{color(v)}" stroke="#ffffff"/>'
                )
                out.append(
                    f'<text x="{x + CELL_W / 2}" y="{y + CELL_H / 2 + 4}" text-anchor="middle" '
                    f'fill="{ink}">{v:.2f}</text>'
                )
        for j, c in enumerate(self.cols):
            x = MARGIN_L + j * CELL_W + CELL_W / 2
            out.append(
                f'<text x="{x}" y="{MARGIN_T + grid_h + 18}" text-anchor="middle">{escape(_fmt(c))}</text>'
            )
        out.append(
            f'<text x="{MARGIN_L + grid_w / 2}" y="{MARGIN_T + grid_h + 38}" text-anchor="middle">'
            f"{escape(self.col_axis)}</text>"
        )
        # color bar, 0 at the bottom
        steps = 20
        bar_h = 120
        for k in range(steps):
            v = 1.0 - (k + 0.5) / steps
            out.append(
                f'<rect x="{bar_x}" y="{MARGIN_T + k * bar_h / steps}" width="{BAR_W}" '
                f'height="{bar_h / steps + 0.5}" fill="{color(v)}"/>'
            )
        out.append(f'<text x="{bar_x + BAR_W + 4}" y="{MARGIN_T + 10}">1.0</text>')
        out.append(f'<text x="{bar_x + BAR_W + 4}" y="{MARGIN_T + bar_h}">0.0</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def emit_heatmap(
    reports: Sequence[ScoreReport], axes: tuple[str, str], title: str = ""
) -> Heatmap:
    """Mean final score per (row, column) cell; every grid cell must be present."""
    row_axis, col_axis = axes
    for axis in axes:
        if axis not in DIMENSIONS:
            raise ValidationError(f"unknown axis {axis!r}; choose from {', '.join(DIMENSIONS)}")
    if row_axis == col_axis:
        raise ValidationError("row and column axes must differ")
    if not reports:
        raise ValidationError("no reports to plot")
    cells: dict[tuple, list[float]] = {}
    for r in reports:
        cells.setdefault((r.dimension(row_axis), r.dimension(col_axis)), []).append(r.breakdown.final)
    rows = _ordered([k[0] for k in cells])
    cols = _ordered([k[1] for k in cells])
    missing = [(r, c) for r in rows for c in cols if (r, c) not in cells]
    if missing:
        names = ", ".join(f"({row_axis}={_fmt(r)}, {col_axis}={_fmt(c)})" for r, c in missing)
        raise ValidationError(f"ragged grid, missing cells: {names}")
    matrix = [[math.fsum(cells[r, c]) / len(cells[r, c]) for c in cols] for r in rows]
    return Heatmap(row_axis, col_axis, rows, cols, matrix, title)
