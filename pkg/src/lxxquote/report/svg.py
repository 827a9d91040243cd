"""Dependency-free SVG rendering for the histogram and PCA scatter plots.

Output is deterministic: coordinates are written with fixed precision and
no timestamps or ids are embedded.
"""

from __future__ import annotations

from typing import Mapping, Sequence
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _attr(text: str) -> str:
    return escape(str(text), {'"': "&quot;"})


def _header(width: int, height: int, title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f"<title>{escape(title)}</title>",
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]


def histogram_svg(hist: Mapping[int, int], title: str = "Quotation lengths", width: int = 720, height: int = 400) -> str:
    parts = _header(width, height, title)
    parts.append(f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>')
    if not hist:
        parts.append(f'<text x="{width / 2:.1f}" y="{height / 2:.1f}" text-anchor="middle" '
                     f'font-size="13" fill="#666">no quotations</text>')
        parts.append("</svg>")
        return "\n".join(parts) + "\n"

    left, right, top, bottom = 60, 20, 40, 50
    plot_w, plot_h = width - left - right, height - top - bottom
    lengths = list(range(min(hist), max(hist) + 1))
    peak = max(hist.values())
    slot = plot_w / len(lengths)
    bar = max(slot * 0.8, 1.0)
    base_y = top + plot_h
    parts.append(f'<line x1="{left}" y1="{base_y}" x2="{left + plot_w}" y2="{base_y}" stroke="#333"/>')
    parts.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{base_y}" stroke="#333"/>')
    for i, length in enumerate(lengths):
        count = hist.get(length, 0)
        h = plot_h * count / peak
        x = left + i * slot + (slot - bar) / 2
        parts.append(f'<rect class="bar" x="{x:.2f}" y="{base_y - h:.2f}" width="{bar:.2f}" height="{h:.2f}" fill="{PALETTE[0]}">'
                     f"<title>length {length}: {count}</title></rect>")
        if len(lengths) <= 40 or length % 5 == 0:
            parts.append(f'<text x="{x + bar / 2:.2f}" y="{base_y + 16}" text-anchor="middle" font-size="11">{length}</text>')
        if count:
            parts.append(f'<text x="{x + bar / 2:.2f}" y="{base_y - h - 4:.2f}" text-anchor="middle" font-size="10">{count}</text>')
    parts.append(f'<text x="{left + plot_w / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="12">length (words)</text>')
    parts.append(f'<text x="16" y="{top + plot_h / 2:.1f}" text-anchor="middle" font-size="12" '
                 f'transform="rotate(-90 16 {top + plot_h / 2:.1f})">quotations</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def scatter_svg(
    coords: Sequence[Sequence[float]],
    labels: Sequence[str],
    groups: Sequence[str] | None = None,
    title: str = "",
    width: int = 800,
    height: int = 640,
) -> str:
    """Labelled scatter without axes; only relative positions carry meaning."""
    parts = _header(width, height, title)
    if title:
        parts.append(f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>')
    pad = 60
    xs = [float(c[0]) for c in coords]
    ys = [float(c[1]) for c in coords]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    sx = (width - 2 * pad) / (x1 - x0) if x1 > x0 else 0.0
    sy = (height - 2 * pad) / (y1 - y0) if y1 > y0 else 0.0
    names = sorted(set(groups)) if groups else []
    color = {g: PALETTE[i % len(PALETTE)] for i, g in enumerate(names)}
    for i, (x, y) in enumerate(zip(xs, ys)):
        px = pad + (x - x0) * sx if sx else width / 2
        py = height - pad - (y - y0) * sy if sy else height / 2
        fill = color[groups[i]] if groups else PALETTE[0]
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="4" fill="{fill}"/>')
        parts.append(f'<text x="{px + 6:.2f}" y="{py - 6:.2f}" font-size="11" fill="{fill}">{escape(labels[i])}</text>')
    for i, g in enumerate(names):
        y = height - 20 - 16 * (len(names) - 1 - i)
        parts.append(f'<circle cx="20" cy="{y - 4}" r="5" fill="{color[g]}"/>'
                     f'<text x="30" y="{y}" font-size="12">{_attr(g)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
