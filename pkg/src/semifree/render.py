"""Deterministic SVG pictures of slice polygons and level diagrams.

Coordinates are exact rationals; they are printed with three decimals by
integer rounding, so identical input gives identical bytes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence
from xml.sax.saxutils import escape

from .circle_action import POINT, SPHERE, FixedComponent, fixed_components
from .polygon import DelzantPolygon, as_fraction, format_fraction
from .polytope import LabeledPolytope, slice_polygon

SCALE = 100
PAD = 40
FIXED_COLOUR = "#d62728"
EDGE_COLOUR = "#1f3b73"


class RenderError(ValueError):
    pass


def fmt(x) -> str:
    """Round to three decimals with integer arithmetic."""
    x = as_fraction(x)
    n = x.numerator * 1000
    d = x.denominator
    q = (2 * n + d) // (2 * d)  # round half up
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, frac = divmod(q, 1000)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:03d}".rstrip("0")


def _header(width, height) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(width)}" height="{fmt(height)}" '
        f'viewBox="0 0 {fmt(width)} {fmt(height)}">',
        f'<rect x="0" y="0" width="{fmt(width)}" height="{fmt(height)}" fill="white"/>',
    ]


def render_polygon(
    poly: DelzantPolygon,
    t=None,
    fixed_edges: Iterable[int] = (),
    title: Optional[str] = None,
) -> str:
    """SVG of a slice polygon; ``fixed_edges`` are drawn in red."""
    if poly.symbolic and t is None:
        t = poly.sample_level()
    verts = poly.vertices_at(t)
    if not verts or any(len(v) != 2 for v in verts):
        raise RenderError("render needs a two-dimensional polygon")
    xs = [v[0] for v in verts]
    ys = [v[1] for v in verts]
    x0, y1 = min(xs), max(ys)
    width = (max(xs) - x0) * SCALE + 2 * PAD
    height = (y1 - min(ys)) * SCALE + 2 * PAD + (20 if title else 0)
    top = 20 if title else 0

    def px(p):
        return ((p[0] - x0) * SCALE + PAD, (y1 - p[1]) * SCALE + PAD + top)

    fixed = set(fixed_edges)
    out = _header(width, height)
    if title:
        out.append(f'<text x="{PAD}" y="16" font-family="sans-serif" font-size="12">{escape(title)}</text>')
    pts = " ".join(f"{fmt(a)},{fmt(b)}" for a, b in map(px, verts))
    out.append(f'<polygon points="{pts}" fill="#e8eef8" stroke="none"/>')
    n = len(verts)
    for i, e in enumerate(poly.edges):
        p, q = px(verts[i - 1]), px(verts[i])
        colour = FIXED_COLOUR if i in fixed else EDGE_COLOUR
        w = Fraction(3) if i in fixed else Fraction(3, 2)
        dash = ' stroke-dasharray="6,4"' if e.excluded else ""
        label = escape(",".join(e.carriers))
        out.append(
            f'<line x1="{fmt(p[0])}" y1="{fmt(p[1])}" x2="{fmt(q[0])}" y2="{fmt(q[1])}" '
            f'stroke="{colour}" stroke-width="{fmt(w)}"{dash}><title>{label}</title></line>'
        )
    for k in poly.critical_corners:
        c = px(verts[k % n])
        out.append(f'<circle cx="{fmt(c[0])}" cy="{fmt(c[1])}" r="4" fill="{FIXED_COLOUR}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def fixed_edges_at(P: LabeledPolytope, xi: Sequence[int], poly: DelzantPolygon, level) -> list[int]:
    """Edges of the level polygon that are fixed spheres of the circle action."""
    level = as_fraction(level)
    out = []
    for c in fixed_components(P, xi):
        if c.kind != SPHERE or c.level != level:
            continue
        labels = set(P.labels(P.edges[c.carrier[1]].facets))
        out += [j for j, e in enumerate(poly.edges) if labels <= set(e.carriers)]
    return sorted(set(out))


def render_slice(
    P: LabeledPolytope, xi: Sequence[int], level, title: Optional[str] = None, basis=None
) -> str:
    """Slice at ``level`` with fixed spheres in red.

    ``basis`` is ``(u, w1, w2)`` with ``<xi, u> = 1``; the picture uses ``w1``
    horizontally and ``w2`` vertically.
    """
    level = as_fraction(level)
    poly = slice_polygon(P, xi, level, basis=basis)
    fixed = fixed_edges_at(P, xi, poly, level)
    return render_polygon(poly, level, fixed, title or f"level {format_fraction(level)}")


def render_levels(components: Sequence[FixedComponent], title: Optional[str] = None) -> str:
    """Fixed components stacked by level: dots for points, red bars for spheres."""
    if not components:
        raise RenderError("nothing to draw")
    levels = sorted({c.level for c in components})
    lo, hi = levels[0], levels[-1]
    span = hi - lo or Fraction(1)
    height = Fraction(300)
    width = Fraction(360)
    top = 20 if title else 0

    def y(level):
        return PAD + top + (hi - level) * height / span

    out = _header(width + 2 * PAD, height + 2 * PAD + top)
    if title:
        out.append(f'<text x="{PAD}" y="16" font-family="sans-serif" font-size="12">{escape(title)}</text>')
    for level in levels:
        yy = y(level)
        out.append(
            f'<line x1="{PAD}" y1="{fmt(yy)}" x2="{fmt(width + PAD)}" y2="{fmt(yy)}" stroke="#bbbbbb" stroke-width="1"/>'
        )
        out.append(
            f'<text x="2" y="{fmt(yy + 4)}" font-family="sans-serif" font-size="10">{escape(format_fraction(level))}</text>'
        )
        here = [c for c in components if c.level == level]
        for j, c in enumerate(here):
            x = PAD + 30 + j * 60
            tip = escape(f"{c.kind} index {c.index} weights {c.weights}")
            if c.kind == POINT:
                out.append(f'<circle cx="{fmt(x)}" cy="{fmt(yy)}" r="4" fill="{EDGE_COLOUR}"><title>{tip}</title></circle>')
            elif c.kind == SPHERE:
                out.append(
                    f'<line x1="{fmt(x - 20)}" y1="{fmt(yy)}" x2="{fmt(x + 20)}" y2="{fmt(yy)}" '
                    f'stroke="{FIXED_COLOUR}" stroke-width="4"><title>{tip}</title></line>'
                )
            else:
                out.append(
                    f'<rect x="{fmt(x - 20)}" y="{fmt(yy - 6)}" width="40" height="12" fill="{FIXED_COLOUR}">'
                    f"<title>{tip}</title></rect>"
                )
    out.append("</svg>")
    return "\n".join(out) + "\n"
