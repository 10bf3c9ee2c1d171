"""Report artifacts: JSON documents, CSV tables and small SVG line plots.

Output is deterministic: JSON keys are sorted, floats use repr, and nothing
time-dependent is written.
"""
import csv
import json
import logging
import math
from pathlib import Path
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

PLOT_WIDTH = 640
PLOT_HEIGHT = 400
MARGIN = 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def ensure_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def write_json(document: Mapping, path: Path) -> Path:
    """Write ``document`` with sorted keys and 2-space indent; non-finite floats become strings."""
    text = json.dumps(_jsonable(document), sort_keys=True, indent=2, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")
    logger.info("wrote %s", path)
    return path


def write_csv(rows: Iterable[Mapping[str, object]], path: Path,
              columns: Optional[Sequence[str]] = None) -> Path:
    """Write dict rows as CSV; columns default to the sorted union of keys."""
    rows = list(rows)
    if columns is None:
        columns = sorted({key for row in rows for key in row})
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(columns), extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    logger.info("wrote %s", path)
    return path


# ========================================================================
# SVG PLOT
# ========================================================================

def _ticks(low: float, high: float, count: int = 5) -> List[float]:
    if high <= low:
        return [low]
    return [low + (high - low) * i / (count - 1) for i in range(count)]


def write_svg_plot(series: Mapping[str, Tuple[Sequence[float], Sequence[float]]], path: Path,
                   title: str, y_label: str, x_label: str = "T") -> Path:
    """
    Draw one polyline per series against a log-scaled x axis.

    Args:
        series: Name -> (x values, y values); x must be positive
        path: Output file
        title: Plot title
        y_label: Label of the vertical axis
        x_label: Label of the horizontal axis
    """
    points = [(x, y) for xs, ys in series.values() for x, y in zip(xs, ys)
              if x > 0 and y is not None and math.isfinite(y)]
    if not points:
        raise ValueError("nothing to plot: every series is empty or non-finite")

    log_x = [math.log10(x) for x, _ in points]
    x_lo, x_hi = min(log_x), max(log_x)
    y_lo, y_hi = min(y for _, y in points), max(y for _, y in points)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0

    inner_w = PLOT_WIDTH - 2 * MARGIN
    inner_h = PLOT_HEIGHT - 2 * MARGIN

    def px(x: float) -> float:
        return MARGIN + inner_w * (math.log10(x) - x_lo) / (x_hi - x_lo)

    def py(y: float) -> float:
        return PLOT_HEIGHT - MARGIN - inner_h * (y - y_lo) / (y_hi - y_lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{PLOT_WIDTH}" height="{PLOT_HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{PLOT_WIDTH / 2:.1f}" y="{MARGIN / 2:.1f}" text-anchor="middle" '
        f'font-size="14">{_escape(title)}</text>',
        f'<line x1="{MARGIN}" y1="{PLOT_HEIGHT - MARGIN}" x2="{PLOT_WIDTH - MARGIN}" '
        f'y2="{PLOT_HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{PLOT_HEIGHT - MARGIN}" stroke="black"/>',
    ]

    for x in sorted({x for x, _ in points}):
        parts.append(f'<text x="{px(x):.1f}" y="{PLOT_HEIGHT - MARGIN + 16}" text-anchor="middle" '
                     f'font-size="10">{x:g}</text>')
    for y in _ticks(y_lo, y_hi):
        parts.append(f'<text x="{MARGIN - 6}" y="{py(y) + 3:.1f}" text-anchor="end" '
                     f'font-size="10">{y:.3g}</text>')
    parts.append(f'<text x="{PLOT_WIDTH / 2:.1f}" y="{PLOT_HEIGHT - 14}" text-anchor="middle" '
                 f'font-size="12">{_escape(x_label)} (log scale)</text>')
    parts.append(f'<text x="14" y="{PLOT_HEIGHT / 2:.1f}" text-anchor="middle" font-size="12" '
                 f'transform="rotate(-90 14 {PLOT_HEIGHT / 2:.1f})">{_escape(y_label)}</text>')

    for i, (name, (xs, ys)) in enumerate(sorted(series.items())):
        colour = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys)
                          if x > 0 and y is not None and math.isfinite(y))
        parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="2" points="{coords}"/>')
        parts.append(f'<text x="{PLOT_WIDTH - MARGIN + 4}" y="{MARGIN + 14 * (i + 1)}" '
                     f'font-size="10" fill="{colour}">{_escape(name)}</text>')
    parts.append("</svg>")

    path.write_text("\n".join(parts) + "\n", encoding="utf-8")
    logger.info("wrote %s", path)
    return path


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")

