"""Scene graph: canvas, drawing state, primitives, styles and named colors."""

from __future__ import annotations

import difflib
import math
from dataclasses import dataclass, field, fields, replace
from functools import lru_cache
from importlib import resources
from typing import Iterator, Optional, Union

from .errors import BadValue, InvalidPrimitive, UnknownColor, UnknownOption
from .geom import (
    ArcCarrier,
    CircleCarrier,
    Point,
    SegmentCarrier,
    WigglySpec,
)

DEFAULT_WIDTH = 0.5
DEFAULT_SEP = 2.0
DEFAULT_DSIZE = 3.0
DEFAULT_TEXT_SIZE = 10.0


# -- colors -------------------------------------------------------------------


def _clamp(v: float) -> float:
    return min(1.0, max(0.0, float(v)))


@dataclass(frozen=True)
class Color:
    r: float
    g: float
    b: float

    def __post_init__(self):
        for f in ("r", "g", "b"):
            object.__setattr__(self, f, _clamp(getattr(self, f)))

    @classmethod
    def gray(cls, level: float) -> "Color":
        return cls(level, level, level)


@lru_cache(maxsize=None)
def color_table() -> dict[str, Color]:
    """The 73 named colors, in table order."""
    text = resources.files("axoforge").joinpath("data/colors.tsv").read_text("utf-8")
    table = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        name, r, g, b = line.split("\t")
        table[name] = Color(float(r), float(g), float(b))
    return table


def color_lookup(name: str) -> Color:
    table = color_table()
    try:
        return table[name]
    except KeyError:
        close = difflib.get_close_matches(name, table, n=3, cutoff=0.6)
        if not close:
            folded = {k.lower(): k for k in table}
            if name.lower() in folded:
                close = [folded[name.lower()]]
        raise UnknownColor(name, close) from None


BLACK = Color(0.0, 0.0, 0.0)
WHITE = Color(1.0, 1.0, 1.0)

Fill = Union[float, str]


def resolve_fill(fill: Fill) -> Color:
    """A fill is either a gray level in [0, 1] or a color name."""
    if isinstance(fill, str):
        return color_lookup(fill)
    return Color.gray(fill)


# -- styles -------------------------------------------------------------------


@dataclass(frozen=True)
class ArrowSpec:
    pos: float = 0.5
    length: float = 10.0
    width: float = 4.0
    inset: float = 0.2
    scale: float = 1.0
    flipped: bool = False

    def __post_init__(self):
        if not 0.0 <= self.pos <= 1.0:
            raise ValueError(f"arrow position {self.pos} outside [0, 1]")
        if not (self.length > 0 and self.width > 0 and self.scale > 0):
            raise ValueError("arrow length, width and scale must be positive")
        if not 0.0 <= self.inset < 1.0:
            raise ValueError(f"arrow inset {self.inset} outside [0, 1)")


@dataclass(frozen=True)
class LineStyle:
    width: float = DEFAULT_WIDTH
    color: Color = BLACK
    double: Optional[float] = None
    dash: Optional[float] = None
    arrows: tuple[ArrowSpec, ...] = ()


@dataclass(frozen=True)
class DrawState:
    color: Color = BLACK
    width: float = DEFAULT_WIDTH
    scale: float = 1.0


FLAG_KEYS = frozenset({"double", "dash", "arrow", "flip"})
NUMBER_KEYS = frozenset({"sep", "dsize", "arrowpos", "arrowlength", "arrowwidth",
                         "arrowinset", "arrowscale", "width"})
OPTION_KEYS = FLAG_KEYS | NUMBER_KEYS | {"color"}
SHAPE_KEYS = frozenset({"color", "width"})
LINE_KINDS = frozenset({"line", "arc", "bezier", "wiggly"})

_ARROW_FIELDS = {
    "arrowpos": "pos",
    "arrowlength": "length",
    "arrowwidth": "width",
    "arrowinset": "inset",
    "arrowscale": "scale",
}


def _number(key, value) -> float:
    if value is True:
        raise BadValue(key, "", "a number is required")
    if isinstance(value, str):
        raise BadValue(key, value, "not a number")
    return float(value)


def resolve_options(kind: str, raw, state: DrawState = DrawState()) -> LineStyle:
    """Merge a raw option map with the drawing state into a LineStyle."""
    opts = dict(raw)
    allowed = OPTION_KEYS if kind in LINE_KINDS else SHAPE_KEYS
    for key, value in opts.items():
        if key not in OPTION_KEYS:
            raise UnknownOption(key)
        if key not in allowed:
            raise UnknownOption(key, f"not applicable to {kind}")
        if key in FLAG_KEYS and value is not True:
            raise BadValue(key, str(value), "takes no value")

    width = state.width
    if "width" in opts:
        width = _number("width", opts["width"])
        if not width > 0:
            raise BadValue("width", str(opts["width"]), "must be positive")

    color = state.color
    if "color" in opts:
        value = opts["color"]
        if not isinstance(value, str):
            raise BadValue("color", str(value), "a color name is required")
        color = color_lookup(value)

    double = None
    if "double" in opts or "sep" in opts:
        double = _number("sep", opts["sep"]) if "sep" in opts else DEFAULT_SEP
        if not double > 0:
            raise BadValue("sep", str(opts["sep"]), "must be positive")

    dash = None
    if "dash" in opts or "dsize" in opts:
        dash = _number("dsize", opts["dsize"]) if "dsize" in opts else DEFAULT_DSIZE
        if not dash > 0:
            raise BadValue("dsize", str(opts["dsize"]), "must be positive")

    arrows = ()
    if "arrow" in opts or "flip" in opts or any(k in opts for k in _ARROW_FIELDS):
        kwargs = {f: _number(k, opts[k]) for k, f in _ARROW_FIELDS.items() if k in opts}
        try:
            arrows = (ArrowSpec(flipped="flip" in opts, **kwargs),)
        except ValueError as exc:
            key = next(iter(k for k in _ARROW_FIELDS if k in opts), "arrow")
            raise BadValue(key, str(opts.get(key, "")), str(exc)) from None

    return LineStyle(width=width, color=color, double=double, dash=dash, arrows=arrows)


def freeze_options(opts) -> tuple:
    """Canonical, hashable form of an option map: sorted (key, value) pairs."""
    return tuple(sorted(dict(opts).items()))


# -- primitives ---------------------------------------------------------------


def _positive(kind, **dims):
    for name, value in dims.items():
        if not (value > 0 and math.isfinite(value)):
            raise InvalidPrimitive(f"{kind}: {name} must be positive, got {value}")


@dataclass(frozen=True)
class Line:
    p1: Point
    p2: Point
    options: tuple = ()
    kind = "line"


@dataclass(frozen=True)
class Arc:
    center: Point
    radius: float
    theta1: float
    theta2: float
    options: tuple = ()
    kind = "arc"

    def __post_init__(self):
        _positive("arc", radius=self.radius)


@dataclass(frozen=True)
class Bezier:
    p0: Point
    p1: Point
    p2: Point
    p3: Point
    options: tuple = ()
    kind = "bezier"


@dataclass(frozen=True)
class Wiggly:
    carrier: Union[SegmentCarrier, ArcCarrier, CircleCarrier]
    spec: WigglySpec
    options: tuple = ()
    kind = "wiggly"

    def __post_init__(self):
        if not isinstance(self.carrier, SegmentCarrier):
            _positive("wiggly", radius=self.carrier.radius)


@dataclass(frozen=True)
class Vertex:
    center: Point
    radius: float
    options: tuple = ()
    kind = "vertex"

    def __post_init__(self):
        _positive("vertex", radius=self.radius)


@dataclass(frozen=True)
class CircleOutline:
    center: Point
    radius: float
    options: tuple = ()
    kind = "circle"

    def __post_init__(self):
        _positive("circle", radius=self.radius)


@dataclass(frozen=True)
class FilledCircle:
    center: Point
    radius: float
    fill: Fill = 0.5
    options: tuple = ()
    kind = "circle"

    def __post_init__(self):
        _positive("circle", radius=self.radius)


def _mod360(obj, name="rotation"):
    object.__setattr__(obj, name, math.fmod(getattr(obj, name), 360.0) % 360.0)


@dataclass(frozen=True)
class Box:
    center: Point
    width: float
    height: float
    rotation: float = 0.0
    fill: Optional[Fill] = None
    options: tuple = ()
    kind = "box"

    def __post_init__(self):
        _positive("box", width=self.width, height=self.height)
        _mod360(self)


@dataclass(frozen=True)
class Polygon:
    points: tuple[Point, ...]
    fill: Optional[Fill] = None
    options: tuple = ()
    kind = "polygon"

    def __post_init__(self):
        if len(self.points) < 3:
            raise InvalidPrimitive(f"polygon needs at least 3 points, got {len(self.points)}")


@dataclass(frozen=True)
class Oval:
    center: Point
    rx: float
    ry: float
    rotation: float = 0.0
    fill: Optional[Fill] = None
    options: tuple = ()
    kind = "oval"

    def __post_init__(self):
        _positive("oval", rx=self.rx, ry=self.ry)
        _mod360(self)


@dataclass(frozen=True)
class Grid:
    origin: Point
    cell_w: float
    cell_h: float
    cols: int
    rows: int
    options: tuple = ()
    kind = "grid"

    def __post_init__(self):
        _positive("grid", cell_w=self.cell_w, cell_h=self.cell_h,
                  cols=self.cols, rows=self.rows)
        if int(self.cols) != self.cols or int(self.rows) != self.rows:
            raise InvalidPrimitive("grid: cols and rows must be integers")
        object.__setattr__(self, "cols", int(self.cols))
        object.__setattr__(self, "rows", int(self.rows))


@dataclass(frozen=True)
class TextLabel:
    anchor: Point
    content: str
    size: float = DEFAULT_TEXT_SIZE
    options: tuple = ()
    kind = "text"


TEXT_PAD = 2.0
CHAR_WIDTH = 0.5    # average Helvetica advance, in ems
LINE_HEIGHT = 1.2   # in ems


def text_width(content: str, size: float) -> float:
    return CHAR_WIDTH * size * len(content)


@dataclass(frozen=True)
class BoxedText:
    center: Point
    lines: tuple[str, ...]
    fill: Optional[Fill] = None
    size: float = DEFAULT_TEXT_SIZE
    options: tuple = ()
    kind = "text"

    def __post_init__(self):
        if not 1 <= len(self.lines) <= 2:
            raise InvalidPrimitive("text boxes hold one or two lines")

    @property
    def width(self) -> float:
        return max(text_width(t, self.size) for t in self.lines) + 2 * TEXT_PAD

    @property
    def height(self) -> float:
        return LINE_HEIGHT * self.size * len(self.lines) + 2 * TEXT_PAD


@dataclass(frozen=True)
class OvalText:
    center: Point
    lines: tuple[str, ...]
    size: float = DEFAULT_TEXT_SIZE
    options: tuple = ()
    kind = "text"

    __post_init__ = BoxedText.__post_init__
    width = BoxedText.width
    height = BoxedText.height


Primitive = Union[Line, Arc, Bezier, Wiggly, Vertex, CircleOutline, FilledCircle, Box,
                  Polygon, Oval, Grid, TextLabel, BoxedText, OvalText]


def _scale_point(p, k):
    return Point(p[0] * k, p[1] * k)


def scale_primitive(p: Primitive, k: float) -> Primitive:
    """Scale coordinates, radii and amplitudes by ``k``; widths and text sizes stay."""
    if k == 1:
        return p
    if isinstance(p, Wiggly):
        c = p.carrier
        if isinstance(c, SegmentCarrier):
            carrier = SegmentCarrier(_scale_point(c.p1, k), _scale_point(c.p2, k))
        else:
            carrier = replace(c, center=_scale_point(c.center, k), radius=c.radius * k)
        return replace(p, carrier=carrier,
                       spec=replace(p.spec, amplitude=p.spec.amplitude * k))
    changes = {}
    for f in fields(p):
        if f.name in ("options", "fill", "rotation", "theta1", "theta2", "cols", "rows",
                      "size", "lines", "content"):
            continue
        value = getattr(p, f.name)
        if f.name == "points":
            changes["points"] = tuple(_scale_point(q, k) for q in value)
        elif isinstance(value, tuple):
            changes[f.name] = _scale_point(value, k)
        else:
            changes[f.name] = value * k
    return replace(p, **changes)


# -- diagram ------------------------------------------------------------------


@dataclass(frozen=True)
class Canvas:
    width: float
    height: float
    origin: Point = Point(0.0, 0.0)
    scale: float = 1.0

    def __post_init__(self):
        _positive("canvas", width=self.width, height=self.height, scale=self.scale)


@dataclass(frozen=True)
class SetColor:
    color: Union[str, Color]


@dataclass(frozen=True)
class SetWidth:
    width: float

    def __post_init__(self):
        _positive("SetWidth", width=self.width)


@dataclass(frozen=True)
class SetScale:
    scale: float

    def __post_init__(self):
        _positive("SetScale", scale=self.scale)


StateChange = Union[SetColor, SetWidth, SetScale]
STATE_CHANGES = (SetColor, SetWidth, SetScale)


def apply_state(state: DrawState, change: StateChange) -> DrawState:
    if isinstance(change, SetColor):
        c = change.color
        return replace(state, color=color_lookup(c) if isinstance(c, str) else c)
    if isinstance(change, SetWidth):
        return replace(state, width=change.width)
    return replace(state, scale=change.scale)


@dataclass(frozen=True)
class Diagram:
    canvas: Canvas
    items: tuple = field(default_factory=tuple)

    def primitives(self) -> list:
        return [it for it in self.items if not isinstance(it, STATE_CHANGES)]

    def styled(self, state: DrawState = DrawState()) -> Iterator[tuple[Primitive, LineStyle]]:
        """Walk the items in order, yielding each scaled primitive with its style."""
        for item in self.items:
            if isinstance(item, STATE_CHANGES):
                state = apply_state(state, item)
                continue
            style = resolve_options(item.kind, item.options, state)
            yield scale_primitive(item, state.scale), style


def bounding_box(d: Diagram) -> tuple[float, float, float, float]:
    c = d.canvas
    llx, lly = c.origin
    return (llx, lly, llx + c.width * c.scale, lly + c.height * c.scale)
