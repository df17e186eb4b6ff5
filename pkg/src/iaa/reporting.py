"""Render analysis results as CSV tables and SVG figures.

Everything here is pure string building: the cli module decides where the
bytes go. Output is deterministic for a given result, so repeated runs over
the same data produce byte-identical artifacts, which makes the files
diffable and safe to version.

Displayed numbers are rounded (similarities, centroids, and heights to three
decimals, support sizes to one) while model membership dumps keep full float
precision, since those are data rather than presentation.
"""

from __future__ import annotations

import io
import math
import re
from typing import Iterable, Sequence

import numpy as np

from .analysis import AnalysisResult, SimilarityMatrix
from .core import DomainGrid, FuzzySet

# Matplotlib's default category palette; familiar and distinguishable.
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

OVERALL_LABEL = "overall_average"


def slugify(label: str) -> str:
    """File-name-safe version of a word or group label."""
    slug = re.sub(r"[^a-z0-9]+", "_", label.lower()).strip("_")
    return slug or "unnamed"


def _fmt(value: float, decimals: int) -> str:
    if math.isnan(value):
        return "nan"
    if value == 0.0:
        value = 0.0  # avoid the "-0.000" rendering
    return f"{value:.{decimals}f}"


def _fmt_x(value: float) -> str:
    # Ten significant digits keep adjacent grid points distinct while hiding
    # linspace rounding dust like 0.07000000000000001.
    return f"{value:.10g}"


def _csv_line(cells: Iterable[str]) -> str:
    out: list[str] = []
    for cell in cells:
        if any(ch in cell for ch in ',"\n'):
            cell = '"' + cell.replace('"', '""') + '"'
        out.append(cell)
    return ",".join(out) + "\n"


def render_matrix_csv(matrix: SimilarityMatrix) -> str:
    """Group-by-group similarity table; the diagonal is written as 1.000."""
    buf = io.StringIO()
    buf.write(_csv_line(["group", *matrix.groups]))
    for i, name in enumerate(matrix.groups):
        buf.write(
            _csv_line([name, *(_fmt(v, 3) for v in matrix.values[i])])
        )
    return buf.getvalue()


def _descriptor_grid(
    result: AnalysisResult, field: str
) -> dict[tuple[str, str], float]:
    return {(row.word, row.group): getattr(row, field) for row in result.descriptors}


def _render_word_by_group(
    result: AnalysisResult,
    field: str,
    decimals: int,
    overall: dict[str, float] | None = None,
) -> str:
    """Words down the rows, groups across the columns."""
    names = result.group_names()
    cells = _descriptor_grid(result, field)
    buf = io.StringIO()
    buf.write(_csv_line(["word", *names]))
    for word in result.dataset.words:
        if not any((word, g) in cells for g in names):
            continue
        row = [word]
        for g in names:
            value = cells.get((word, g), math.nan)
            row.append(_fmt(value, decimals))
        buf.write(_csv_line(row))
    if overall is not None:
        buf.write(
            _csv_line(
                [OVERALL_LABEL, *(_fmt(overall.get(g, math.nan), decimals) for g in names)]
            )
        )
    return buf.getvalue()


def render_centroids_csv(result: AnalysisResult) -> str:
    return _render_word_by_group(
        result, "centroid", 3, overall=dict(result.group_centroid_means)
    )


def render_heights_csv(result: AnalysisResult) -> str:
    return _render_word_by_group(result, "height", 3)


def render_supports_csv(result: AnalysisResult) -> str:
    return _render_word_by_group(result, "support", 1)


def render_modes_csv(result: AnalysisResult) -> str:
    buf = io.StringIO()
    names = result.group_names()
    cells = _descriptor_grid(result, "modes")
    buf.write(_csv_line(["word", *names]))
    for word in result.dataset.words:
        if not any((word, g) in cells for g in names):
            continue
        row = [word]
        for g in names:
            value = cells.get((word, g))
            row.append("" if value is None else str(value))
        buf.write(_csv_line(row))
    return buf.getvalue()


def render_gaps_csv(result: AnalysisResult) -> str:
    """Long-format table of adjacent-word centroid gaps with flags."""
    buf = io.StringIO()
    buf.write(_csv_line(["group", "earlier_word", "later_word", "gap", "flags"]))
    for row in result.gaps:
        buf.write(
            _csv_line(
                [row.group, row.earlier_word, row.later_word,
                 _fmt(row.gap, 3), ";".join(row.flags)]
            )
        )
    return buf.getvalue()


def render_models_csv(result: AnalysisResult, group: str) -> str:
    """Grid-point membership dump for one group, one column per word."""
    words = [w for w in result.dataset.words if group in result.models.get(w, {})]
    xs = result.dataset.grid.points()
    buf = io.StringIO()
    buf.write(_csv_line(["x", *words]))
    columns = [result.models[w][group].memberships for w in words]
    for i, x in enumerate(xs):
        buf.write(_csv_line([_fmt_x(x), *(repr(float(col[i])) for col in columns)]))
    return buf.getvalue()


# --- SVG figures -----------------------------------------------------------

_WIDTH, _HEIGHT = 720, 400
_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 54, 16, 24, 44


def _runs(mu: np.ndarray) -> list[tuple[int, int, float]]:
    """Maximal constant runs as (first index, last index, value)."""
    breaks = np.flatnonzero(np.diff(mu) != 0.0)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [mu.size - 1]))
    return [(int(s), int(e), float(mu[s])) for s, e in zip(starts, ends)]


def _staircase_path(fs: FuzzySet, to_px) -> str:
    """Piecewise-constant membership curve with steps at cell midpoints."""
    grid = fs.grid
    half = grid.step / 2.0
    xs = grid.points()
    parts: list[str] = []
    for s, e, value in _runs(fs.memberships):
        left = max(grid.min, xs[s] - half)
        right = min(grid.max, xs[e] + half)
        px0, py = to_px(left, value)
        px1, _ = to_px(right, value)
        if not parts:
            parts.append(f"M {px0} {py}")
        else:
            parts.append(f"L {px0} {py}")  # vertical drop/rise at the midpoint
        parts.append(f"L {px1} {py}")
    return " ".join(parts)


def _svg_figure(
    grid: DomainGrid,
    series: Sequence[tuple[str, FuzzySet]],
    title: str,
) -> str:
    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM
    span = grid.max - grid.min

    def to_px(x: float, y: float) -> tuple[str, str]:
        px = _MARGIN_LEFT + (x - grid.min) / span * plot_w
        py = _MARGIN_TOP + (1.0 - y) * plot_h
        return f"{px:.2f}", f"{py:.2f}"

    out = io.StringIO()
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}" '
        f'font-family="sans-serif" font-size="12">\n'
    )
    out.write(f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>\n')
    out.write(
        f'<text x="{_WIDTH / 2:.0f}" y="15" text-anchor="middle" '
        f'font-size="14">{_escape(title)}</text>\n'
    )

    # Axes with light horizontal gridlines at the y ticks.
    x0, y0 = to_px(grid.min, 0.0)
    x1, _ = to_px(grid.max, 0.0)
    _, y1 = to_px(grid.min, 1.0)
    for frac in (0.25, 0.5, 0.75, 1.0):
        _, gy = to_px(grid.min, frac)
        out.write(
            f'<line x1="{x0}" y1="{gy}" x2="{x1}" y2="{gy}" '
            f'stroke="#dddddd" stroke-width="1"/>\n'
        )
        out.write(
            f'<text x="{float(x0) - 8:.2f}" y="{float(gy) + 4:.2f}" '
            f'text-anchor="end">{frac:g}</text>\n'
        )
    out.write(
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>\n'
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>\n'
        f'<text x="{float(x0) - 8:.2f}" y="{float(y0) + 4:.2f}" text-anchor="end">0</text>\n'
    )
    for i in range(6):
        tick = grid.min + span * i / 5
        tx, _ = to_px(tick, 0.0)
        out.write(
            f'<line x1="{tx}" y1="{y0}" x2="{tx}" '
            f'y2="{float(y0) + 5:.2f}" stroke="black"/>\n'
        )
        out.write(
            f'<text x="{tx}" y="{float(y0) + 18:.2f}" '
            f'text-anchor="middle">{tick:.10g}</text>\n'
        )
    out.write(
        f'<text x="{float(x0) - 36:.2f}" y="{_MARGIN_TOP + plot_h / 2:.2f}" '
        f'text-anchor="middle" transform="rotate(-90 '
        f'{float(x0) - 36:.2f} {_MARGIN_TOP + plot_h / 2:.2f})">membership</text>\n'
    )

    for idx, (label, fs) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        out.write(
            f'<path d="{_staircase_path(fs, to_px)}" fill="none" '
            f'stroke="{color}" stroke-width="1.8"/>\n'
        )
        ly = _MARGIN_TOP + 14 + idx * 16
        lx = _WIDTH - _MARGIN_RIGHT - 150
        out.write(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.8"/>\n'
        )
        out.write(f'<text x="{lx + 28}" y="{ly}">{_escape(label)}</text>\n')

    out.write("</svg>\n")
    return out.getvalue()


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_group_plot(result: AnalysisResult, group: str) -> str:
    """All of one group's word models overlaid on the scale."""
    series = [
        (word, result.models[word][group])
        for word in result.dataset.words
        if group in result.models.get(word, {})
    ]
    return _svg_figure(result.dataset.grid, series, f"Word models: {group}")


def render_word_plot(result: AnalysisResult, word: str) -> str:
    """One word's model from every group overlaid on the scale."""
    series = [
        (name, result.models[word][name])
        for name in result.group_names()
        if name in result.models.get(word, {})
    ]
    return _svg_figure(result.dataset.grid, series, f"Group models: {word}")


def render_summary(result: AnalysisResult) -> str:
    """Human-readable run overview for the terminal."""
    ds = result.dataset
    lines = [
        f"{len(ds.participant_ids())} participants, {len(ds.words)} words, "
        f"{len(ds.records)} records",
        f"scale [{ds.grid.min:g}, {ds.grid.max:g}] step {ds.grid.step:g}",
        "groups: " + ", ".join(result.group_names()),
    ]
    for word, missing in result.skipped_words.items():
        lines.append(
            f"note: {word!r} skipped in similarity averaging "
            f"(no responses from: {', '.join(missing)})"
        )
    for name, mean in result.group_centroid_means.items():
        lines.append(f"mean word centroid for {name}: {_fmt(mean, 3)}")
    violations = [g for g in result.gaps if "ordering_violation" in g.flags]
    for g in violations:
        lines.append(
            f"warning: {g.group}: {g.later_word!r} has a smaller centroid than "
            f"{g.earlier_word!r} (gap {_fmt(g.gap, 3)})"
        )
    lines.append(
        "support sizes count closed-endpoint grid cells, so each reported "
        "value is the covered length plus one grid step"
    )
    return "\n".join(lines) + "\n"
