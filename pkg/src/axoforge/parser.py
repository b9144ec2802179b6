"""Reader and writer for ``.axo`` diagram source.

A document is an ``axopicture`` environment::

    \\begin{axopicture}(200,110)
      \\SetColor{Red}
      \\Arc[arrow](100,50)(40,0,180)
      \\Gluon(0,50)(60,50){5}{4}
    \\end{axopicture}

Each command is ``\\Name``, an optional ``[key,key=value]`` option list and
a fixed sequence of ``(a,b,...)`` and ``{v}`` argument groups. A command
never spans lines. ``%`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import difflib
import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Callable, Optional

from .errors import AxoforgeError, BadValue, UnknownColor, UnknownOption
from .geom import ArcCarrier, CircleCarrier, Point, SegmentCarrier, WigglySpec
from . import model as m

NUMBER_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)")
NAME_RE = re.compile(r"[A-Za-z]+")
_COMMENT_RE = re.compile(r"(?<!\\)%")


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 0


class ParseError(AxoforgeError):
    def __init__(self, span: SourceSpan, message: str, expected: Optional[str] = None):
        self.span = span
        self.message = message
        self.expected = expected
        super().__init__(f"{span.line}:{span.column}: {message}")


# -- option lists -------------------------------------------------------------


def _value(text: str):
    if NUMBER_RE.fullmatch(text):
        return float(text)
    return text


def parse_option_list(raw: str) -> dict:
    """Parse the interior of ``[...]`` into a key -> value map.

    Bare keys map to ``True``; numeric values become floats, anything else
    (color names) stays a string. The last occurrence of a key wins.
    """
    opts = {}
    for entry in raw.split(","):
        entry = entry.strip()
        if not entry:
            continue
        key, eq, value = entry.partition("=")
        key, value = key.strip(), value.strip()
        if not key:
            raise BadValue(key, value, "missing option name")
        if not eq:
            opts[key] = True
        elif not value:
            raise BadValue(key, "", "empty value")
        else:
            opts[key] = _value(value)
    return opts


# -- command table ------------------------------------------------------------

# Argument group codes:
#   "(k)"  parenthesised group of k numbers ("(k)*" repeats, at least 3 times)
#   "{n}"  number        "{t}"  verbatim text
#   "{f}"  fill: gray level or color name
#   "{c}"  color: name or r,g,b
#   "{f}?" optional trailing fill


@dataclass(frozen=True)
class _Command:
    signature: tuple
    build: Callable


def _pt(g):
    return Point(g[0], g[1])


def _count(value, what, span):
    if value != int(value) or value < 1:
        raise ParseError(span, f"{what} must be a positive integer, got {fmt_number(value)}")
    return int(value)


def _with(opts, **extra):
    merged = dict(opts)
    merged.update(extra)
    return m.freeze_options(merged)


def _line(**extra):
    return lambda a, o, s: m.Line(_pt(a[0]), _pt(a[1]), _with(o, **extra))


def _arc(**extra):
    return lambda a, o, s: m.Arc(_pt(a[0]), a[1][0], a[1][1], a[1][2], _with(o, **extra))


def _wiggly(kind, carrier_kind):
    def build(a, o, s):
        if carrier_kind == "segment":
            carrier = SegmentCarrier(_pt(a[0]), _pt(a[1]))
        elif carrier_kind == "arc":
            carrier = ArcCarrier(_pt(a[0]), a[1][0], a[1][1], a[1][2])
        else:
            carrier = CircleCarrier(_pt(a[0]), a[1][0])
        spec = WigglySpec(kind, a[2], _count(a[3], "count", s))
        return m.Wiggly(carrier, spec, o)
    return build


def _boxed(fill_index=None, lines=1):
    def build(a, o, s):
        fill = a[fill_index] if fill_index is not None else None
        texts = tuple(a[len(a) - lines:])
        return m.BoxedText(_pt(a[0]), texts, fill, options=o)
    return build


COMMANDS: dict[str, _Command] = {
    "Line": _Command(("(2)", "(2)"), _line()),
    "DashLine": _Command(("(2)", "(2)", "{n}"),
                         lambda a, o, s: m.Line(_pt(a[0]), _pt(a[1]),
                                                _with(o, dash=True, dsize=a[2]))),
    "DoubleLine": _Command(("(2)", "(2)", "{n}"),
                           lambda a, o, s: m.Line(_pt(a[0]), _pt(a[1]),
                                                  _with(o, double=True, sep=a[2]))),
    "DashDoubleLine": _Command(
        ("(2)", "(2)", "{n}", "{n}"),
        lambda a, o, s: m.Line(_pt(a[0]), _pt(a[1]),
                               _with(o, double=True, sep=a[2], dash=True, dsize=a[3]))),
    "ArrowLine": _Command(("(2)", "(2)"), _line(arrow=True)),
    "LongArrow": _Command(("(2)", "(2)"), _line(arrow=True, arrowpos=1.0)),
    "Arc": _Command(("(2)", "(3)"), _arc()),
    "CArc": _Command(("(2)", "(3)"), _arc()),
    "DashArc": _Command(("(2)", "(3)", "{n}"),
                        lambda a, o, s: m.Arc(_pt(a[0]), a[1][0], a[1][1], a[1][2],
                                              _with(o, dash=True, dsize=a[2]))),
    "ArrowArc": _Command(("(2)", "(3)"), _arc(arrow=True)),
    "LongArrowArc": _Command(("(2)", "(3)"), _arc(arrow=True, arrowpos=1.0)),
    "Bezier": _Command(("(2)",) * 4,
                       lambda a, o, s: m.Bezier(*map(_pt, a[:4]), o)),
    "DashBezier": _Command(("(2)",) * 4 + ("{n}",),
                           lambda a, o, s: m.Bezier(*map(_pt, a[:4]),
                                                    _with(o, dash=True, dsize=a[4]))),
    "Gluon": _Command(("(2)", "(2)", "{n}", "{n}"), _wiggly("gluon", "segment")),
    "GluonArc": _Command(("(2)", "(3)", "{n}", "{n}"), _wiggly("gluon", "arc")),
    "GlueArc": _Command(("(2)", "(3)", "{n}", "{n}"), _wiggly("gluon", "arc")),
    "GluonCircle": _Command(("(2)", "(1)", "{n}", "{n}"), _wiggly("gluon", "circle")),
    "Photon": _Command(("(2)", "(2)", "{n}", "{n}"), _wiggly("photon", "segment")),
    "PhotonArc": _Command(("(2)", "(3)", "{n}", "{n}"), _wiggly("photon", "arc")),
    "ZigZag": _Command(("(2)", "(2)", "{n}", "{n}"), _wiggly("zigzag", "segment")),
    "Vertex": _Command(("(2)", "{n}"), lambda a, o, s: m.Vertex(_pt(a[0]), a[1], o)),
    "ECirc": _Command(("(2)", "{n}"), lambda a, o, s: m.CircleOutline(_pt(a[0]), a[1], o)),
    "GCirc": _Command(("(2)", "{n}", "{f}"),
                      lambda a, o, s: m.FilledCircle(_pt(a[0]), a[1], a[2], o)),
    "EBoxc": _Command(("(2)", "{n}", "{n}"),
                      lambda a, o, s: m.Box(_pt(a[0]), a[1], a[2], options=o)),
    "Boxc": _Command(("(2)", "{n}", "{n}"),
                     lambda a, o, s: m.Box(_pt(a[0]), a[1], a[2], options=o)),
    "GBoxc": _Command(("(2)", "{n}", "{n}", "{f}"),
                      lambda a, o, s: m.Box(_pt(a[0]), a[1], a[2], fill=a[3], options=o)),
    "RBox": _Command(("(2)", "{n}", "{n}", "{n}", "{f}?"),
                     lambda a, o, s: m.Box(_pt(a[0]), a[1], a[2], a[3], a[4], o)),
    "Polygon": _Command(("(2)*",),
                        lambda a, o, s: m.Polygon(tuple(map(_pt, a[0])), None, o)),
    "FPolygon": _Command(("(2)*", "{f}"),
                         lambda a, o, s: m.Polygon(tuple(map(_pt, a[0])), a[1], o)),
    "Oval": _Command(("(2)", "(2)", "(1)"),
                     lambda a, o, s: m.Oval(_pt(a[0]), a[1][1], a[1][0], a[2][0], None, o)),
    "GOval": _Command(("(2)", "(2)", "(1)", "{f}"),
                      lambda a, o, s: m.Oval(_pt(a[0]), a[1][1], a[1][0], a[2][0], a[3], o)),
    "AxoGrid": _Command(("(2)", "(2)", "(2)"),
                        lambda a, o, s: m.Grid(_pt(a[0]), a[1][0], a[1][1],
                                               _count(a[2][0], "columns", s),
                                               _count(a[2][1], "rows", s), o)),
    "Text": _Command(("(2)", "{t}"),
                     lambda a, o, s: m.TextLabel(_pt(a[0]), a[1], options=o)),
    "BText": _Command(("(2)", "{t}"), _boxed()),
    "GText": _Command(("(2)", "{f}", "{t}"), _boxed(fill_index=1)),
    "CText": _Command(("(2)", "{t}"),
                      lambda a, o, s: m.OvalText(_pt(a[0]), (a[1],), options=o)),
    "BTwoText": _Command(("(2)", "{t}", "{t}"), _boxed(lines=2)),
    "GTwoText": _Command(("(2)", "{f}", "{t}", "{t}"), _boxed(fill_index=1, lines=2)),
    "CTwoText": _Command(("(2)", "{t}", "{t}"),
                         lambda a, o, s: m.OvalText(_pt(a[0]), (a[1], a[2]), options=o)),
    "SetColor": _Command(("{c}",), lambda a, o, s: m.SetColor(a[0])),
    "SetWidth": _Command(("{n}",), lambda a, o, s: m.SetWidth(a[0])),
    "SetScale": _Command(("{n}",), lambda a, o, s: m.SetScale(a[0])),
}

_NO_OPTIONS = {"SetColor", "SetWidth", "SetScale"}


# -- scanner ------------------------------------------------------------------


class _Scanner:
    """Cursor over a single source line; columns are 1-based."""

    def __init__(self, text: str, lineno: int = 1):
        self.text = text
        self.lineno = lineno
        self.pos = 0

    def span(self, start=None, length=0) -> SourceSpan:
        start = self.pos if start is None else start
        return SourceSpan(self.lineno, start + 1, length)

    def error(self, message, start=None, length=0, expected=None):
        return ParseError(self.span(start, length), message, expected)

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r":
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of line"
            raise self.error(f"expected {ch!r}, found {found}", expected=ch)
        self.pos += 1

    def looking_at(self, literal: str) -> bool:
        return self.text.startswith(literal, self.pos)

    def number(self) -> float:
        self.skip_ws()
        mt = NUMBER_RE.match(self.text, self.pos)
        if not mt:
            raise self.error("expected a number", length=1 if self.peek() else 0,
                             expected="number")
        self.pos = mt.end()
        return float(mt.group())

    def paren_group(self, k: int) -> tuple:
        self.expect("(")
        vals = [self.number()]
        for _ in range(k - 1):
            self.expect(",")
            vals.append(self.number())
        self.expect(")")
        return tuple(vals)

    def brace_text(self) -> tuple[str, int]:
        """Verbatim text between balanced braces, plus its start column."""
        self.expect("{")
        start, depth = self.pos, 1
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "\\":
                self.pos += 2
                continue
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    return self.text[start:self.pos - 1], start
            self.pos += 1
        self.pos = len(self.text)
        raise self.error("expected '}'", expected="}")

    def brace_number(self) -> float:
        self.expect("{")
        v = self.number()
        self.expect("}")
        return v

    def brace_fill(self):
        text, start = self.brace_text()
        text = text.strip()
        if NUMBER_RE.fullmatch(text):
            return float(text)
        if not NAME_RE.fullmatch(text):
            raise self.error(f"expected a gray level or color name, found {text!r}",
                             start, len(text) or 1)
        try:
            m.color_lookup(text)
        except UnknownColor as exc:
            raise self.error(str(exc), start, len(text)) from None
        return text

    def brace_color(self):
        text, start = self.brace_text()
        parts = [p.strip() for p in text.split(",")]
        if len(parts) == 3 and all(NUMBER_RE.fullmatch(p) for p in parts):
            return m.Color(*map(float, parts))
        name = text.strip()
        try:
            m.color_lookup(name)
        except UnknownColor as exc:
            raise self.error(str(exc), start, len(text)) from None
        return name

    def argument(self, code: str, cmd_start: int):
        if code == "(2)*":
            groups = []
            while True:
                self.skip_ws()
                if self.peek() != "(":
                    break
                groups.append(self.paren_group(2))
            if len(groups) < 3:
                raise self.error("expected at least 3 points", expected="(")
            return tuple(groups)
        if code.startswith("("):
            return self.paren_group(int(code[1]))
        if code == "{n}":
            return self.brace_number()
        if code == "{t}":
            return self.brace_text()[0]
        if code == "{f}":
            return self.brace_fill()
        if code == "{f}?":
            self.skip_ws()
            return self.brace_fill() if self.peek() == "{" else None
        if code == "{c}":
            return self.brace_color()
        raise AssertionError(code)

    def command(self):
        self.skip_ws()
        start = self.pos
        if self.peek() != "\\":
            raise self.error("expected a command", length=1, expected="\\")
        self.pos += 1
        mt = NAME_RE.match(self.text, self.pos)
        if not mt:
            raise self.error("expected a command name", expected="name")
        name = mt.group()
        if name not in COMMANDS:
            msg = f"unknown command \\{name}"
            close = difflib.get_close_matches(name, COMMANDS, n=1)
            if close:
                msg += f" (did you mean \\{close[0]}?)"
            raise self.error(msg, start, len(name) + 1)
        self.pos = mt.end()
        cmd = COMMANDS[name]

        opts, opt_start, opt_len = {}, start, len(name) + 1
        self.skip_ws()
        if self.peek() == "[":
            if name in _NO_OPTIONS:
                raise self.error(f"\\{name} takes no options", length=1)
            opt_start = self.pos
            close = self.text.find("]", self.pos)
            if close < 0:
                self.pos = len(self.text)
                raise self.error("expected ']'", expected="]")
            raw = self.text[self.pos + 1:close]
            opt_len = close + 1 - opt_start
            self.pos = close + 1
            try:
                opts = parse_option_list(raw)
            except BadValue as exc:
                raise self.error(str(exc), opt_start, opt_len) from None

        args = [self.argument(code, start) for code in cmd.signature]
        whole = self.span(start, self.pos - start)
        try:
            item = cmd.build(args, m.freeze_options(opts), whole)
        except ParseError:
            raise
        except (AxoforgeError, ValueError) as exc:
            raise ParseError(whole, f"\\{name}: {exc}") from None
        if opts:
            try:
                m.resolve_options(item.kind, item.options)
            except (UnknownOption, BadValue, UnknownColor) as exc:
                raise self.error(str(exc), opt_start, opt_len) from None
        return item


def _strip_comment(line: str) -> str:
    mt = _COMMENT_RE.search(line)
    return line[:mt.start()] if mt else line


def parse_command(line: str, lineno: int = 1):
    """Parse exactly one command (a primitive or a state change)."""
    sc = _Scanner(_strip_comment(line), lineno)
    item = sc.command()
    sc.skip_ws()
    if not sc.at_end():
        raise sc.error("unexpected text after command", length=len(sc.text) - sc.pos)
    return item


_BEGIN = "\\begin{axopicture}"
_END = "\\end{axopicture}"


def parse_document(src: str) -> m.Diagram:
    canvas = None
    items = []
    finished = False
    lines = src.splitlines() or [""]
    for lineno, raw in enumerate(lines, 1):
        sc = _Scanner(_strip_comment(raw), lineno)
        while True:
            sc.skip_ws()
            if sc.at_end():
                break
            if finished:
                raise sc.error("unexpected text after \\end{axopicture}",
                               length=len(sc.text) - sc.pos)
            if canvas is None:
                if not sc.looking_at(_BEGIN):
                    raise sc.error("expected \\begin{axopicture}", length=1,
                                   expected=_BEGIN)
                start = sc.pos
                sc.pos += len(_BEGIN)
                w, h = sc.paren_group(2)
                sc.skip_ws()
                origin = Point(*sc.paren_group(2)) if sc.peek() == "(" else Point(0.0, 0.0)
                try:
                    canvas = m.Canvas(w, h, origin)
                except AxoforgeError as exc:
                    raise sc.error(str(exc), start, sc.pos - start) from None
            elif sc.looking_at(_END):
                sc.pos += len(_END)
                finished = True
            else:
                items.append(sc.command())
    if not finished:
        last = len(lines)
        col = len(lines[-1]) + 1
        if canvas is None:
            raise ParseError(SourceSpan(last, col), "missing \\begin{axopicture}", _BEGIN)
        raise ParseError(SourceSpan(last, col), "missing end: expected \\end{axopicture}",
                         _END)
    return m.Diagram(canvas, tuple(items))


# -- writer -------------------------------------------------------------------


def fmt_number(x: float) -> str:
    """Up to 6 significant digits, positional notation, trailing zeros trimmed."""
    s = format(Decimal(f"{float(x):.6g}"), "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s



def _opts(options) -> str:
    if not options:
        return ""
    parts = []
    for key, value in sorted(options):
        if value is True:
            parts.append(key)
        elif isinstance(value, str):
            parts.append(f"{key}={value}")
        else:
            parts.append(f"{key}={fmt_number(value)}")
    return "[" + ",".join(parts) + "]"


def _g(*vals) -> str:
    return "(" + ",".join(fmt_number(v) for v in vals) + ")"


def _b(v) -> str:
    if isinstance(v, str):
        return "{" + v + "}"
    return "{" + fmt_number(v) + "}"


def serialize_item(item) -> str:
    o = _opts(getattr(item, "options", ()))
    if isinstance(item, m.SetColor):
        c = item.color
        if isinstance(c, str):
            return f"\\SetColor{{{c}}}"
        return f"\\SetColor{{{fmt_number(c.r)},{fmt_number(c.g)},{fmt_number(c.b)}}}"
    if isinstance(item, m.SetWidth):
        return f"\\SetWidth{_b(item.width)}"
    if isinstance(item, m.SetScale):
        return f"\\SetScale{_b(item.scale)}"
    if isinstance(item, m.Line):
        return f"\\Line{o}{_g(*item.p1)}{_g(*item.p2)}"
    if isinstance(item, m.Arc):
        return f"\\Arc{o}{_g(*item.center)}{_g(item.radius, item.theta1, item.theta2)}"
    if isinstance(item, m.Bezier):
        return "\\Bezier" + o + "".join(_g(*p) for p in (item.p0, item.p1, item.p2, item.p3))
    if isinstance(item, m.Wiggly):
        c, spec = item.carrier, item.spec
        name = {"gluon": "Gluon", "photon": "Photon", "zigzag": "ZigZag"}[spec.kind]
        if isinstance(c, SegmentCarrier):
            geo = _g(*c.p1) + _g(*c.p2)
        elif isinstance(c, ArcCarrier):
            name += "Arc"
            geo = _g(*c.center) + _g(c.radius, c.theta1, c.theta2)
        else:
            name += "Circle"
            geo = _g(*c.center) + _g(c.radius)
        if name not in COMMANDS:
            raise ValueError(f"{spec.kind} on this carrier has no source form")
        return f"\\{name}{o}{geo}{_b(spec.amplitude)}{_b(spec.count)}"
    if isinstance(item, m.Vertex):
        return f"\\Vertex{o}{_g(*item.center)}{_b(item.radius)}"
    if isinstance(item, m.CircleOutline):
        return f"\\ECirc{o}{_g(*item.center)}{_b(item.radius)}"
    if isinstance(item, m.FilledCircle):
        return f"\\GCirc{o}{_g(*item.center)}{_b(item.radius)}{_b(item.fill)}"
    if isinstance(item, m.Box):
        dims = _g(*item.center) + _b(item.width) + _b(item.height)
        if item.rotation:
            fill = "" if item.fill is None else _b(item.fill)
            return f"\\RBox{o}{dims}{_b(item.rotation)}{fill}"
        if item.fill is None:
            return f"\\EBoxc{o}{dims}"
        return f"\\GBoxc{o}{dims}{_b(item.fill)}"
    if isinstance(item, m.Polygon):
        pts = "".join(_g(*p) for p in item.points)
        if item.fill is None:
            return f"\\Polygon{o}{pts}"
        return f"\\FPolygon{o}{pts}{_b(item.fill)}"
    if isinstance(item, m.Oval):
        geo = _g(*item.center) + _g(item.ry, item.rx) + _g(item.rotation)
        if item.fill is None:
            return f"\\Oval{o}{geo}"
        return f"\\GOval{o}{geo}{_b(item.fill)}"
    if isinstance(item, m.Grid):
        return (f"\\AxoGrid{o}{_g(*item.origin)}{_g(item.cell_w, item.cell_h)}"
                f"{_g(item.cols, item.rows)}")
    if isinstance(item, (m.TextLabel, m.BoxedText, m.OvalText)):
        if item.size != m.DEFAULT_TEXT_SIZE:
            raise ValueError("text size has no source form")
    if isinstance(item, m.TextLabel):
        return f"\\Text{o}{_g(*item.anchor)}{{{item.content}}}"
    if isinstance(item, (m.BoxedText, m.OvalText)):
        texts = "".join("{" + t + "}" for t in item.lines)
        two = "Two" if len(item.lines) == 2 else ""
        if isinstance(item, m.OvalText):
            return f"\\C{two}Text{o}{_g(*item.center)}{texts}"
        if item.fill is None:
            return f"\\B{two}Text{o}{_g(*item.center)}{texts}"
        return f"\\G{two}Text{o}{_g(*item.center)}{_b(item.fill)}{texts}"
    raise TypeError(f"cannot serialize {item!r}")


def serialize(d: m.Diagram) -> str:
    c = d.canvas
    if c.scale != 1:
        raise ValueError("a scaled canvas has no source form")
    header = _BEGIN + _g(c.width, c.height)
    if c.origin != (0, 0):
        header += _g(*c.origin)
    lines = [header]
    lines += ["  " + serialize_item(it) for it in d.items]
    lines.append(_END)
    return "\n".join(lines) + "\n"
