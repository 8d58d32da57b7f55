"""SVG drawing of a net: clipped lines, incircles, optionally the conic."""
from __future__ import annotations

import math
from xml.sax.saxutils import quoteattr

import numpy as np

from .net import CheckerboardNet


def _bbox(net: CheckerboardNet):
    pts = [(c.cx - abs(c.r), c.cy - abs(c.r), c.cx + abs(c.r), c.cy + abs(c.r))
           for c in net.circles.values() if c is not None]
    if not pts:
        return -1.0, -1.0, 1.0, 1.0
    a = np.array(pts)
    x0, y0, x1, y1 = a[:, 0].min(), a[:, 1].min(), a[:, 2].max(), a[:, 3].max()
    span = max(x1 - x0, y1 - y0, 1e-9)
    m = 0.1 * span
    return x0 - m, y0 - m, x1 + m, y1 + m


def _clip(line, box):
    """Segment of the line inside the box (Liang-Barsky), or None."""
    x0, y0, x1, y1 = box
    px, py = line.d * line.v, line.d * line.w
    dx, dy = -line.w, line.v
    lo, hi = -math.inf, math.inf
    for p, q in ((-dx, px - x0), (dx, x1 - px), (-dy, py - y0), (dy, y1 - py)):
        if abs(p) < 1e-15:
            if q < 0:
                return None
            continue
        t = q / p
        if p < 0:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
    if lo > hi:
        return None
    return (px + lo * dx, py + lo * dy), (px + hi * dx, py + hi * dy)


def _num(x: float) -> str:
    return f"{x:.6g}"


def _conic_points(meta: dict, box) -> list[list[tuple[float, float]]]:
    params = meta.get("params", {})
    al, be = params.get("alpha"), params.get("beta")
    if al is None or be is None:
        return []
    t = np.linspace(0, 2 * math.pi, 361)
    if meta.get("kind") == "hyperbolic":
        x0, y0, x1, y1 = box
        tmax = math.asinh(max(abs(y0), abs(y1)) / be + 1)
        u = np.linspace(-tmax, tmax, 241)
        return [list(zip(s * al * np.cosh(u), be * np.sinh(u))) for s in (1, -1)]
    return [list(zip(al * np.cos(t), be * np.sin(t)))]


def _path_data(pts) -> str:
    return " ".join(f"{'M' if i == 0 else 'L'}{_num(x)},{_num(-y)}" for i, (x, y) in enumerate(pts))


def render_svg(net: CheckerboardNet, meta: dict | None = None, width: int = 800,
               show_conic: bool = False, envelope=None) -> str:
    """SVG text; y points up (the drawing is flipped in SVG coordinates).

    ``envelope`` is an optional (n, 2) array of points drawn as one path.
    """
    meta = meta or {}
    box = _bbox(net)
    x0, y0, x1, y1 = box
    w, h = x1 - x0, y1 - y0
    height = max(1, int(round(width * h / w)))
    sw = _num(0.002 * max(w, h))
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="{_num(x0)} {_num(-y1)} {_num(w)} {_num(h)}">',
           f'<title>{quoteattr(str(meta.get("kind", "net")))[1:-1]}</title>',
           f'<g fill="none" stroke-width="{sw}">']
    for fam, group, colour in (("v", net.vertical, "#1f4e9c"), ("h", net.horizontal, "#9c1f3a")):
        for i in sorted(group):
            seg = _clip(group[i], box)
            if seg is None:
                continue
            (ax, ay), (bx, by) = seg
            out.append(f'<line x1="{_num(ax)}" y1="{_num(-ay)}" x2="{_num(bx)}" y2="{_num(-by)}" '
                       f'stroke="{colour}" data-line="{fam}{i}"/>')
    for cell in sorted(net.circles):
        c = net.circles[cell]
        if c is None:
            continue
        out.append(f'<circle cx="{_num(c.cx)}" cy="{_num(-c.cy)}" r="{_num(abs(c.r))}" '
                   f'stroke="#222" data-cell="{cell[0]},{cell[1]}"/>')
    if show_conic:
        for pts in _conic_points(meta, box):
            out.append(f'<path d="{_path_data(pts)}" stroke="#2a8a3a" data-role="conic"/>')
    if envelope is not None and len(envelope):
        pts = [(x, y) for x, y in envelope if abs(x) < 1e6 and abs(y) < 1e6]
        out.append(f'<path d="{_path_data(pts)}" stroke="#c07a00" stroke-dasharray="{sw}" data-role="envelope"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
