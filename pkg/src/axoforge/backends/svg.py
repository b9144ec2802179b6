"""SVG 1.1 output.

The document unit is the TeX point: the root declares ``width="…pt"`` and a
``viewBox`` in the same unit, so coordinates are written unconverted. The y
axis is flipped numerically so diagram y grows upward.
"""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

from .. import geom
from ..model import Color, Diagram, Wiggly, bounding_box
from ..stroker import Fill, Stroke, Text, render_items
from .units import fmt4


def svg_color(c: Color) -> str:
    return "#%02x%02x%02x" % tuple(round(v * 255) for v in (c.r, c.g, c.b))


def _label(prim) -> str:
    if isinstance(prim, Wiggly):
        return prim.spec.kind
    return type(prim).__name__.lower()


def _path_data(pl, flip, closed=False) -> str:
    parts = []
    for i, p in enumerate(pl.points):
        x, y = flip(p)
        parts.append(("M" if i == 0 else "L") + fmt4(x) + " " + fmt4(y))
    if closed:
        parts.append("Z")
    return " ".join(parts)


def emit_svg(d: Diagram, tol: float = geom.DEFAULT_TOL) -> str:
    llx, lly, urx, ury = bounding_box(d)
    width, height = urx - llx, ury - lly

    def flip(p):
        return p[0] - llx, ury - p[1]

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{fmt4(width)}pt" height="{fmt4(height)}pt" '
        f'viewBox="0 0 {fmt4(width)} {fmt4(height)}">',
    ]
    for n, (prim, drawables) in enumerate(render_items(d, tol), 1):
        out.append(f'<g id="item{n}" class="{_label(prim)}">')
        for dr in drawables:
            if isinstance(dr, Stroke):
                out.append(
                    f'<path d="{_path_data(dr.pl, flip)}" fill="none" '
                    f'stroke="{svg_color(dr.color)}" stroke-width="{fmt4(dr.width)}" '
                    f'stroke-linecap="round" stroke-linejoin="round"/>')
            elif isinstance(dr, Fill):
                out.append(
                    f'<path d="{_path_data(dr.boundary, flip, closed=True)}" '
                    f'fill="{svg_color(dr.color)}" stroke="none"/>')
            elif isinstance(dr, Text):
                x, y = flip(dr.anchor)
                out.append(
                    f'<text x="{fmt4(x)}" y="{fmt4(y)}" font-family="Helvetica" '
                    f'font-size="{fmt4(dr.size)}" text-anchor="middle" '
                    f'dominant-baseline="alphabetic" fill={quoteattr(svg_color(dr.color))}>'
                    f'{escape(dr.content)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
