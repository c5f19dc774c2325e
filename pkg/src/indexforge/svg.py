"""Dependency-free SVG boxplots of weight summaries.

Each box is a ``<g class="box">`` group with whisker, cap, IQR rectangle,
median line and mean marker. The plot area rectangle carries the axis range
in ``data-ymin``/``data-ymax`` so coordinates can be mapped back to weights.
"""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

from .simulation import STAT_NAMES, BoxplotSummary
from .weighting import Method

WIDTH, HEIGHT = 520, 340
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 64, 20, 44, 52
BOX_FILL = "#9ecae1"


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_boxplot(summary: BoxplotSummary, method, title: str | None = None) -> str:
    method = Method.parse(method)
    table = summary.stats[method]
    names = summary.indicator_names
    ymax = float(table[:, STAT_NAMES.index("max")].max())
    if ymax <= 0.0:
        ymax = 1.0
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    bottom = MARGIN_TOP + plot_h

    def y(v: float) -> float:
        return bottom - v / ymax * plot_h

    title = title or f"Indicator weights: {method.value} (n={summary.counts[method]})"
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect class="plot-area" x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#444" data-ymin="0" data-ymax="{ymax!r}"/>',
    ]
    for k in range(6):
        v = ymax * k / 5
        yy = _fmt(y(v))
        parts.append(f'<line class="tick" x1="{MARGIN_LEFT - 4}" x2="{MARGIN_LEFT}" y1="{yy}" y2="{yy}" stroke="#444"/>')
        parts.append(f'<text x="{MARGIN_LEFT - 7}" y="{yy}" text-anchor="end" dominant-baseline="middle">{v:.3f}</text>')
    parts.append(
        f'<text transform="translate(16 {MARGIN_TOP + plot_h / 2}) rotate(-90)" text-anchor="middle">weight</text>'
    )

    slot = plot_w / len(names)
    box_w = min(48.0, slot * 0.5)
    for i, (name, row) in enumerate(zip(names, table)):
        lo, q1, med, q3, hi, mean = (float(v) for v in row)
        cx = MARGIN_LEFT + slot * (i + 0.5)
        left, right = cx - box_w / 2, cx + box_w / 2
        parts += [
            f'<g class="box" data-indicator={quoteattr(name)}>',
            f'<line class="whisker" x1="{_fmt(cx)}" x2="{_fmt(cx)}" y1="{_fmt(y(hi))}" y2="{_fmt(y(lo))}" stroke="#333"/>',
            f'<line class="cap-max" x1="{_fmt(cx - box_w / 4)}" x2="{_fmt(cx + box_w / 4)}" y1="{_fmt(y(hi))}" y2="{_fmt(y(hi))}" stroke="#333"/>',
            f'<line class="cap-min" x1="{_fmt(cx - box_w / 4)}" x2="{_fmt(cx + box_w / 4)}" y1="{_fmt(y(lo))}" y2="{_fmt(y(lo))}" stroke="#333"/>',
            f'<rect class="iqr" x="{_fmt(left)}" y="{_fmt(y(q3))}" width="{_fmt(box_w)}" height="{_fmt(y(q1) - y(q3))}" '
            f'fill="{BOX_FILL}" stroke="#333"/>',
            f'<line class="median" x1="{_fmt(left)}" x2="{_fmt(right)}" y1="{_fmt(y(med))}" y2="{_fmt(y(med))}" stroke="#c00" stroke-width="2"/>',
            f'<circle class="mean" cx="{_fmt(cx)}" cy="{_fmt(y(mean))}" r="2.5" fill="#333"/>',
            "</g>",
            f'<text x="{_fmt(cx)}" y="{bottom + 18}" text-anchor="middle">{escape(name)}</text>',
        ]
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
