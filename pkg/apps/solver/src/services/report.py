"""
Output writers: CSV (golden-file friendly), a JSON mirror, and the SVG curve.
"""

import csv
import io
import json
from collections.abc import Sequence
from typing import Any

import numpy as np

from ..errors import InvalidInput
from ..models.results import CurveSample

FORMATS = ("csv", "json")

SVG_WIDTH = 640
SVG_HEIGHT = 480
SVG_MARGIN = 60
TICKS_PER_AXIS = 5


def render_csv(records: Sequence[dict[str, Any]], fieldnames: Sequence[str] | None = None) -> str:
    """Header line, comma separator, '\\n' line endings; values are already formatted strings."""
    if fieldnames is None:
        fieldnames = list(records[0].keys()) if records else []
        for record in records:
            fieldnames += [key for key in record if key not in fieldnames]
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), lineterminator="\n", restval="")
    writer.writeheader()
    for record in records:
        writer.writerow({key: _csv_value(value) for key, value in record.items()})
    return buffer.getvalue()


def _csv_value(value: Any) -> Any:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return " ".join(str(x) for x in value)
    return value


def render_json(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def render(records: Sequence[dict[str, Any]], fmt: str, fieldnames: Sequence[str] | None = None) -> str:
    if fmt == "csv":
        return render_csv(records, fieldnames)
    if fmt == "json":
        return render_json(list(records))
    raise InvalidInput(f"unknown output format {fmt!r}, expected one of {', '.join(FORMATS)}")


def render_blocks(blocks: dict[str, Sequence[dict[str, Any]]], fmt: str) -> str:
    """
    Several tables in one document.

    CSV blocks are separated by a blank line; JSON nests each block under its name.
    """
    if fmt == "json":
        return render_json({name: list(records) for name, records in blocks.items()})
    return "\n".join(render(records, fmt) for records in blocks.values())


def _axis(values: np.ndarray, lo_px: float, hi_px: float) -> tuple[np.ndarray, np.ndarray]:
    """Tick values spanning `values` and their pixel positions."""
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    ticks = np.linspace(lo, hi, TICKS_PER_AXIS)
    return ticks, np.interp(ticks, [lo, hi], [lo_px, hi_px])


def _polyline(xs: np.ndarray, ys: np.ndarray, style: str) -> str:
    points = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    return f'  <polyline fill="none" {style} points="{points}"/>'


def render_svg(curve: Sequence[CurveSample], overlay: Sequence[tuple[float, float]] | None = None) -> str:
    """
    E0 against k with linear axes and 5 labeled ticks each.

    The computed curve is solid; an overlay, when given, is dashed and shares the axes.
    """
    # Failed samples leave a gap in the data, not in the drawn line
    ours = np.array([[float(s.k), float(s.E0)] for s in curve if s.E0 is not None], dtype=float).reshape(-1, 2)
    other = np.array(overlay, dtype=float) if overlay else np.empty((0, 2))
    everything = np.vstack([ours, other])

    left, right = SVG_MARGIN, SVG_WIDTH - SVG_MARGIN
    top, bottom = SVG_MARGIN, SVG_HEIGHT - SVG_MARGIN
    x_ticks, x_px = _axis(everything[:, 0], left, right)
    y_ticks, y_px = _axis(everything[:, 1], bottom, top)

    def to_px(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        xs = np.interp(points[:, 0], [x_ticks[0], x_ticks[-1]], [left, right])
        ys = np.interp(points[:, 1], [y_ticks[0], y_ticks[-1]], [bottom, top])
        return xs, ys

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'  <line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'  <line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>',
    ]
    for value, px in zip(x_ticks, x_px):
        lines.append(f'  <line x1="{px:.2f}" y1="{bottom}" x2="{px:.2f}" y2="{bottom + 5}" stroke="black"/>')
        lines.append(f'  <text x="{px:.2f}" y="{bottom + 20}" text-anchor="middle" font-size="12">{value:.4g}</text>')
    for value, px in zip(y_ticks, y_px):
        lines.append(f'  <line x1="{left - 5}" y1="{px:.2f}" x2="{left}" y2="{px:.2f}" stroke="black"/>')
        lines.append(f'  <text x="{left - 8}" y="{px + 4:.2f}" text-anchor="end" font-size="12">{value:.4g}</text>')
    lines.append(f'  <text x="{(left + right) / 2}" y="{SVG_HEIGHT - 15}" text-anchor="middle" font-size="14">k</text>')
    lines.append(f'  <text x="15" y="{(top + bottom) / 2}" text-anchor="middle" font-size="14">E0</text>')

    lines.append(_polyline(*to_px(ours), 'stroke="black" stroke-width="1.5"'))
    if len(other):
        lines.append(_polyline(*to_px(other), 'stroke="gray" stroke-width="1.5" stroke-dasharray="6,4"'))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
