"""Lowering of styled primitives into backend-neutral drawables."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from . import geom
from . import model as m
from .errors import GeometryError
from .geom import Frame, Point, Polyline

VERTEX_SIDES = 64
TEXT_BASELINE_DROP = 0.3    # ems below the anchor, to centre caps vertically


@dataclass(frozen=True)
class Stroke:
    pl: Polyline
    width: float
    color: m.Color


@dataclass(frozen=True)
class Fill:
    boundary: Polyline
    color: m.Color


@dataclass(frozen=True)
class Text:
    anchor: Point
    content: str
    size: float
    color: m.Color


Drawable = Union[Stroke, Fill, Text]


def arrowhead(f: Frame, spec: m.ArrowSpec, color: m.Color = m.BLACK) -> Fill:
    """Notched arrowhead centred on ``f.at``, pointing along the tangent."""
    length, width = spec.length * spec.scale, spec.width * spec.scale
    tx, ty = f.tangent
    if spec.flipped:
        tx, ty = -tx, -ty
    nx, ny = -ty, tx
    ax, ay = f.at
    tip = (ax + 0.5 * length * tx, ay + 0.5 * length * ty)
    rx, ry = tip[0] - length * tx, tip[1] - length * ty
    hw = 0.5 * width
    notch_back = length * (1.0 - spec.inset)
    pts = [
        tip,
        (rx + hw * nx, ry + hw * ny),
        (tip[0] - notch_back * tx, tip[1] - notch_back * ty),
        (rx - hw * nx, ry - hw * ny),
        tip,
    ]
    return Fill(Polyline.from_points(pts), color)


def base_curve(p, tol: float) -> Polyline:
    """The flattened centre line of a line-like primitive."""
    if isinstance(p, m.Line):
        return Polyline.from_points([p.p1, p.p2])
    if isinstance(p, m.Arc):
        return geom.flatten_arc(p.center, p.radius, p.theta1, p.theta2, tol)
    if isinstance(p, m.Bezier):
        return geom.flatten_bezier(p.p0, p.p1, p.p2, p.p3, tol)
    if isinstance(p, m.Wiggly):
        return geom.wiggly_path(p.carrier, p.spec, tol)
    raise TypeError(f"{type(p).__name__} has no centre line")


def _rect(center, w, h, rotation=0.0) -> Polyline:
    cr, sr = geom.unit_vector_deg(rotation)
    cx, cy = center
    pts = []
    for x, y in ((-w / 2, -h / 2), (w / 2, -h / 2), (w / 2, h / 2), (-w / 2, h / 2)):
        pts.append((cx + x * cr - y * sr, cy + x * sr + y * cr))
    pts.append(pts[0])
    return Polyline.from_points(pts)


def _closed(points) -> Polyline:
    pts = list(points)
    if pts[0] != pts[-1]:
        pts.append(pts[0])
    return Polyline.from_points(pts)


def _text_rows(center, lines, size, color) -> list:
    n = len(lines)
    step = m.LINE_HEIGHT * size
    out = []
    for i, content in enumerate(lines):
        y = center[1] + (n - 1) / 2 * step - i * step - TEXT_BASELINE_DROP * size
        out.append(Text(Point(center[0], y), content, size, color))
    return out


def _line_like(p, style: m.LineStyle, tol: float) -> list:
    base = base_curve(p, tol)
    if geom.arc_length(base) == 0.0:
        raise GeometryError("curve has zero length")
    if style.double is not None:
        half = style.double / 2
        paths = [geom.trim_swallowtails(geom.offset(base, d), base, d) for d in (half, -half)]
    else:
        paths = [base]
    if style.dash is not None:
        paths = [piece for pl in paths for piece in geom.dash_split(pl, style.dash)]
    out = [Stroke(pl, style.width, style.color) for pl in paths]
    for spec in style.arrows:
        out.append(arrowhead(geom.frame_at(base, spec.pos), spec, style.color))
    return out


def realize(p, style: m.LineStyle, tol: float = geom.DEFAULT_TOL) -> list:
    """Drawables for one primitive, in paint order."""
    try:
        return _realize(p, style, tol)
    except GeometryError as exc:
        raise type(exc)(f"{type(p).__name__}: {exc}") from exc


def _realize(p, style, tol):
    w, color = style.width, style.color
    if p.kind in m.LINE_KINDS:
        return _line_like(p, style, tol)
    if isinstance(p, m.Vertex):
        return [Fill(geom.regular_polygon(p.center, p.radius, VERTEX_SIDES), color)]
    if isinstance(p, m.CircleOutline):
        return [Stroke(geom.flatten_arc(p.center, p.radius, 0, 360, tol), w, color)]
    if isinstance(p, m.FilledCircle):
        ring = geom.flatten_arc(p.center, p.radius, 0, 360, tol)
        return [Fill(ring, m.resolve_fill(p.fill)), Stroke(ring, w, color)]
    if isinstance(p, m.Box):
        outline = _rect(p.center, p.width, p.height, p.rotation)
        return _filled_outline(outline, p.fill, w, color)
    if isinstance(p, m.Polygon):
        return _filled_outline(_closed(p.points), p.fill, w, color)
    if isinstance(p, m.Oval):
        outline = geom.ellipse_points(p.center, p.rx, p.ry, p.rotation, tol)
        return _filled_outline(outline, p.fill, w, color)
    if isinstance(p, m.Grid):
        return _grid(p, style)
    if isinstance(p, m.TextLabel):
        return _text_rows(p.anchor, (p.content,), p.size, color)
    if isinstance(p, m.BoxedText):
        outline = _rect(p.center, p.width, p.height)
        fill = m.WHITE if p.fill is None else m.resolve_fill(p.fill)
        return ([Fill(outline, fill), Stroke(outline, w, color)]
                + _text_rows(p.center, p.lines, p.size, color))
    if isinstance(p, m.OvalText):
        rx, ry = p.width / math.sqrt(2), p.height / math.sqrt(2)
        outline = geom.ellipse_points(p.center, rx, ry, 0.0, tol)
        return ([Fill(outline, m.WHITE), Stroke(outline, w, color)]
                + _text_rows(p.center, p.lines, p.size, color))
    raise TypeError(f"cannot realize {p!r}")


def _filled_outline(outline, fill, width, color) -> list:
    if fill is None:
        return [Stroke(outline, width, color)]
    return [Fill(outline, m.resolve_fill(fill)), Stroke(outline, width, color)]


def _grid(p: m.Grid, style: m.LineStyle) -> list:
    color = style.color if any(k == "color" for k, _ in p.options) \
        else m.color_lookup("LightGray")
    x0, y0 = p.origin
    x1, y1 = x0 + p.cols * p.cell_w, y0 + p.rows * p.cell_h
    out = []
    for i in range(p.cols + 1):
        x = x0 + i * p.cell_w
        out.append(Stroke(Polyline.from_points([(x, y0), (x, y1)]), style.width, color))
    for j in range(p.rows + 1):
        y = y0 + j * p.cell_h
        out.append(Stroke(Polyline.from_points([(x0, y), (x1, y)]), style.width, color))
    return out


# -- whole diagrams -----------------------------------------------------------


def transform_drawable(d: Drawable, fn) -> Drawable:
    if isinstance(d, Stroke):
        return Stroke(d.pl.transformed(fn), d.width, d.color)
    if isinstance(d, Fill):
        return Fill(d.boundary.transformed(fn), d.color)
    return Text(Point(*fn(d.anchor)), d.content, d.size, d.color)


def render_items(diagram: m.Diagram, tol: float = geom.DEFAULT_TOL) -> list:
    """(primitive, drawables) for every primitive, in paint order.

    Drawables are in canvas coordinates: a canvas scale is applied about the
    canvas origin.
    """
    c = diagram.canvas
    ox, oy, k = c.origin[0], c.origin[1], c.scale

    def zoom(q):
        return Point(ox + (q[0] - ox) * k, oy + (q[1] - oy) * k)

    out = []
    for prim, style in diagram.styled():
        drawables = realize(prim, style, tol)
        if k != 1:
            drawables = [transform_drawable(d, zoom) for d in drawables]
        out.append((prim, drawables))
    return out


def render_drawables(diagram: m.Diagram, tol: float = geom.DEFAULT_TOL) -> list:
    """Every drawable of a diagram, in paint order, in canvas coordinates."""
    return [d for _, ds in render_items(diagram, tol) for d in ds]
