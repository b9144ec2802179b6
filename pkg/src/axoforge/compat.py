"""The two-pass helper: ``.ax1`` deferred commands in, ``.ax2`` graphics out.

``.ax1`` lines read ``id ; xscale ; yscale ; command``; blank lines and lines
starting with ``%`` are skipped. Each ``.ax2`` record reads
``id ; llx lly urx ury ; payload`` where the bounding box is in big points
and the payload is the object's PDF content-stream operators on one line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import geom
from . import model as m
from .backends.pdf import content_ops
from .backends.units import fmt4, pt_to_bp
from .errors import Ax1Format, AxoforgeError, DuplicateId, EntryError
from .geom import Point
from .parser import parse_command
from .stroker import Fill, Stroke, Text, realize, transform_drawable

_ID_RE = re.compile(r"\d+")
_SCALE_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)")


@dataclass(frozen=True)
class Ax1Entry:
    id: int
    xscale: float
    yscale: float
    command: str


@dataclass(frozen=True)
class Ax2Entry:
    id: int
    bbox: tuple[float, float, float, float]
    payload: str


def read_ax1(src: str) -> list[Ax1Entry]:
    entries, seen = [], set()
    for lineno, line in enumerate(src.splitlines(), 1):
        text = line.strip()
        if not text or text.startswith("%"):
            continue
        fields = text.split(";", 3)
        if len(fields) != 4:
            raise Ax1Format(lineno, "expected 'id ; xscale ; yscale ; command'")
        ident, xs, ys, command = (f.strip() for f in fields)
        if not _ID_RE.fullmatch(ident) or int(ident) < 1:
            raise Ax1Format(lineno, f"bad id {ident!r}")
        for name, value in (("xscale", xs), ("yscale", ys)):
            if not _SCALE_RE.fullmatch(value) or not float(value) > 0:
                raise Ax1Format(lineno, f"bad {name} {value!r}")
        if not command:
            raise Ax1Format(lineno, "missing command")
        if int(ident) in seen:
            raise DuplicateId(int(ident), lineno)
        seen.add(int(ident))
        entries.append(Ax1Entry(int(ident), float(xs), float(ys), command))
    return entries


def _points(drawables):
    for d in drawables:
        if isinstance(d, Stroke):
            yield from d.pl.points
        elif isinstance(d, Fill):
            yield from d.boundary.points
        elif isinstance(d, Text):
            yield d.anchor


def process_entry(entry: Ax1Entry, tol: float = geom.DEFAULT_TOL) -> Ax2Entry:
    try:
        item = parse_command(entry.command)
        if isinstance(item, m.STATE_CHANGES):
            return Ax2Entry(entry.id, (0.0, 0.0, 0.0, 0.0), "")
        style = m.resolve_options(item.kind, item.options)
        drawables = realize(item, style, tol)
    except AxoforgeError as exc:
        raise EntryError(entry.id, exc) from exc
    sx, sy = entry.xscale, entry.yscale
    if (sx, sy) != (1.0, 1.0):
        drawables = [transform_drawable(d, lambda q: Point(q[0] * sx, q[1] * sy))
                     for d in drawables]
    pts = list(_points(drawables))
    xs = [pt_to_bp(p[0]) for p in pts]
    ys = [pt_to_bp(p[1]) for p in pts]
    bbox = (min(xs), min(ys), max(xs), max(ys))
    return Ax2Entry(entry.id, bbox, " ".join(content_ops(drawables)))


def format_ax2(records) -> str:
    lines = []
    for r in records:
        box = " ".join(fmt4(v) for v in r.bbox)
        lines.append(f"{r.id} ; {box} ; {r.payload}")
    return "\n".join(lines) + ("\n" if lines else "")


def read_ax2(src: str) -> list[Ax2Entry]:
    out = []
    for lineno, line in enumerate(src.splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split(";", 2)
        if len(fields) != 3:
            raise ValueError(f"line {lineno}: expected 'id ; llx lly urx ury ; payload'")
        box = tuple(float(v) for v in fields[1].split())
        if len(box) != 4:
            raise ValueError(f"line {lineno}: bounding box needs four numbers")
        out.append(Ax2Entry(int(fields[0]), box, fields[2].strip()))
    return out


def process_ax1(src: str, tol: float = geom.DEFAULT_TOL) -> str:
    return format_ax2(process_entry(e, tol) for e in read_ax1(src))
