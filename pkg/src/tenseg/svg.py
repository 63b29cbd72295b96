"""SVG 1.1 drawings: thick struts, thin cables, double-stroked bars.

Points are projected onto the first two coordinates and fitted into a fixed
1000 x 1000 view box.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .model import Tensegrity, edge_rows

SIZE = 1000
MARGIN = 60
ARROW_PX = 90


class Fit:
    """Affine map from model coordinates to view-box pixels (y flipped)."""

    def __init__(self, P: np.ndarray):
        lo, hi = P.min(axis=0), P.max(axis=0)
        span = float(max(hi - lo)) or 1.0
        self.scale = (SIZE - 2 * MARGIN) / span
        self.offset = (SIZE - self.scale * (lo + hi)) / 2

    def __call__(self, p) -> tuple[float, float]:
        x = self.offset[0] + self.scale * p[0]
        y = SIZE - (self.offset[1] + self.scale * p[1])
        return float(x), float(y)


def _f(x: float) -> str:
    return f"{x:.3f}"


def _line(a, b, cls, width, color, extra=""):
    return (f'<line class="{cls}" x1="{_f(a[0])}" y1="{_f(a[1])}" x2="{_f(b[0])}" '
            f'y2="{_f(b[1])}" stroke="{color}" stroke-width="{width}"'
            f' stroke-linecap="round"{extra}/>')


def render_svg(t: Tensegrity, weights=None, motion=None, title: str | None = None) -> str:
    """``weights`` labels each edge row; ``motion`` (vertex-major field) draws arrows."""
    P = np.array(t.positions, dtype=float).reshape(-1, t.dim)
    P2 = P[:, :2] if t.dim >= 2 else np.c_[P, np.zeros(len(P))]
    fit = Fit(P2) if len(P2) else None
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           f'viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">',
           '<defs><marker id="head" viewBox="0 0 10 10" refX="9" refY="5" '
           'markerWidth="8" markerHeight="8" orient="auto">'
           '<path d="M0,0 L10,5 L0,10 z" fill="#c0392b"/></marker></defs>',
           f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>']
    if title:
        out.append(f"<title>{escape(title)}</title>")
    if fit is None:
        out.append("</svg>")
        return "\n".join(out) + "\n"
    xy = [fit(p) for p in P2]

    for chain in t.chains:
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in (xy[t.index(v)] for v in chain))
        out.append(f'<polyline class="chain" points="{pts}" fill="none" stroke="#9aa5b1" '
                   'stroke-width="1" stroke-dasharray="6,4"/>')

    ix = t.index
    for a, b in t.struts:
        out.append(_line(xy[ix(a)], xy[ix(b)], "edge strut", 8, "#222"))
    for a, b in t.cables:
        out.append(_line(xy[ix(a)], xy[ix(b)], "edge cable", 2, "#1f5fa8"))
    for a, b in t.bars:
        pa, pb = xy[ix(a)], xy[ix(b)]
        out.append(f'<g class="edge bar">{_line(pa, pb, "bar-outer", 9, "#222")}'
                   f'{_line(pa, pb, "bar-inner", 4, "white")}</g>')

    if weights is not None:
        rows = edge_rows(t)
        labels: dict[tuple[int, int], list[str]] = {}
        for k, r in enumerate(rows):
            labels.setdefault(r.endpoints, []).append(f"{weights[k]:.4g}")
        for (i, j), text in labels.items():
            mx, my = (xy[i][0] + xy[j][0]) / 2, (xy[i][1] + xy[j][1]) / 2
            out.append(f'<text class="weight" x="{_f(mx)}" y="{_f(my - 6)}" font-size="16" '
                       f'text-anchor="middle" fill="#b35900">{escape("/".join(text))}</text>')

    if motion is not None:
        V = np.asarray(motion, dtype=float).reshape(-1, t.dim)[:, :2]
        top = float(np.max(np.linalg.norm(V, axis=1), initial=0.0))
        if top > 0:
            k = ARROW_PX / top
            for vid, p, v in zip(t.ids, xy, V):
                if np.linalg.norm(v) * k < 1e-9:
                    continue
                q = (p[0] + k * v[0], p[1] - k * v[1])
                arrow = _line(p, q, "arrow", 2.5, "#c0392b", ' marker-end="url(#head)"')
                out.append(f"<g><title>{escape(vid)}</title>{arrow}</g>")

    for vid, (x, y) in zip(t.ids, xy):
        out.append(f'<circle class="vertex" cx="{_f(x)}" cy="{_f(y)}" r="6" fill="white" '
                   f'stroke="#222" stroke-width="2"><title>{escape(vid)}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

