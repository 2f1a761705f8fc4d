"""Minimal hand-written SVG plots with byte-stable output."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

# viridis anchor colours, evenly spaced on [0, 1]
_ANCHORS = [
    (68, 1, 84),
    (59, 82, 139),
    (33, 145, 140),
    (94, 201, 98),
    (253, 231, 37),
]
NAN_COLOR = "#cccccc"

WIDTH, HEIGHT = 640, 480
LEFT, RIGHT, TOP, BOTTOM = 80, 110, 40, 60


def color(t: float) -> str:
    """Map t in [0, 1] onto the colour scale."""
    t = min(max(t, 0.0), 1.0) * (len(_ANCHORS) - 1)
    i = min(int(t), len(_ANCHORS) - 2)
    f = t - i
    a, b = _ANCHORS[i], _ANCHORS[i + 1]
    r, g, bl = (round(a[c] + f * (b[c] - a[c])) for c in range(3))
    return f"#{r:02x}{g:02x}{bl:02x}"


def _scale(v: np.ndarray) -> tuple[float, float]:
    finite = v[np.isfinite(v)]
    if finite.size == 0:
        return 0.0, 0.0
    return float(finite.min()), float(finite.max())


def _unit(v: float, lo: float, hi: float) -> float:
    return 0.5 if hi == lo else (v - lo) / (hi - lo)


def _num(v: float) -> str:
    return f"{v:.6g}"


def _header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]


def heatmap(z, row_values, col_values, row_label: str, col_label: str, title: str) -> str:
    """Colour-mapped grid: rows of ``z`` run up the y axis, columns along x."""
    z = np.asarray(z, dtype=float)
    nr, nc = z.shape
    lo, hi = _scale(z)
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM
    cw, ch = pw / nc, ph / nr
    out = _header(title)
    for i in range(nr):
        for j in range(nc):
            v = z[i, j]
            fill = color(_unit(v, lo, hi)) if math.isfinite(v) else NAN_COLOR
            x = LEFT + j * cw
            y = TOP + (nr - 1 - i) * ch
            out.append(
                f'<rect x="{x:.3f}" y="{y:.3f}" width="{cw:.3f}" height="{ch:.3f}" fill="{fill}">'
                f"<title>{escape(row_label)}={_num(row_values[i])}, {escape(col_label)}={_num(col_values[j])}: "
                f"{_num(v)}</title></rect>"
            )
    out.append(
        f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(col_label)} '
        f"[{_num(col_values[0])} .. {_num(col_values[-1])}]</text>"
    )
    out.append(
        f'<text x="20" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {TOP + ph / 2:.1f})">{escape(row_label)} '
        f"[{_num(row_values[0])} .. {_num(row_values[-1])}]</text>"
    )
    # colour bar
    bx = WIDTH - RIGHT + 20
    steps = 50
    for k in range(steps):
        y = TOP + ph - (k + 1) * ph / steps
        out.append(f'<rect x="{bx}" y="{y:.3f}" width="16" height="{ph / steps:.3f}" fill="{color(k / (steps - 1))}"/>')
    out.append(f'<text x="{bx + 20}" y="{TOP + 10}">{_num(hi)}</text>')
    out.append(f'<text x="{bx + 20}" y="{TOP + ph}">{_num(lo)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def line(x, y, x_label: str, y_label: str, title: str) -> str:
    """Polyline through the finite points, sorted by x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = np.isfinite(x) & np.isfinite(y)
    order = np.argsort(x[ok], kind="stable")
    xs, ys = x[ok][order], y[ok][order]
    xlo, xhi = _scale(xs)
    ylo, yhi = _scale(ys)
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM
    pts = [(LEFT + _unit(a, xlo, xhi) * pw, TOP + ph - _unit(b, ylo, yhi) * ph) for a, b in zip(xs, ys)]
    out = _header(title)
    out.append(
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#888888"/>'
    )
    out.append(
        '<polyline fill="none" stroke="#3b528b" stroke-width="1.5" points="'
        + " ".join(f"{px:.3f},{py:.3f}" for px, py in pts)
        + '"/>'
    )
    for px, py in pts:
        out.append(f'<circle cx="{px:.3f}" cy="{py:.3f}" r="2" fill="#21918c"/>')
    out.append(f'<text x="{LEFT}" y="{HEIGHT - 40}" text-anchor="start">{_num(xlo)}</text>')
    out.append(f'<text x="{LEFT + pw}" y="{HEIGHT - 40}" text-anchor="end">{_num(xhi)}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(f'<text x="{LEFT - 5}" y="{TOP + ph}" text-anchor="end">{_num(ylo)}</text>')
    out.append(f'<text x="{LEFT - 5}" y="{TOP + 10}" text-anchor="end">{_num(yhi)}</text>')
    out.append(
        f'<text x="20" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {TOP + ph / 2:.1f})">{escape(y_label)}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
