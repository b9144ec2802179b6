"""Single-page PDF 1.4 writer with an uncompressed content stream.

Every coordinate and length goes through :func:`pt_to_bp` on the way out.
:func:`inspect_pdf` re-reads our own output and checks the cross-reference
table against the actual byte positions.
"""

from __future__ import annotations

import re

from .. import geom
from ..errors import AxoforgeError
from ..model import Color, Diagram, bounding_box, text_width
from ..stroker import Fill, Stroke, Text, render_drawables
from .units import fmt4, pt_to_bp

PROLOGUE = ["1", "J", "1", "j"]    # round caps and joins, matching the SVG output


class PdfFormatError(AxoforgeError):
    pass


def _rgb(c: Color) -> list[str]:
    return [fmt4(c.r), fmt4(c.g), fmt4(c.b)]


def _escape(text: str) -> str:
    raw = text.encode("latin-1", "replace").decode("latin-1")
    return raw.replace("\\", "\\\\").replace("(", "\\(").replace(")", "\\)")


def content_ops(drawables, dx: float = 0.0, dy: float = 0.0) -> list[str]:
    """Content-stream tokens for drawables, shifted by (dx, dy) pt first."""
    def xy(p):
        return [fmt4(pt_to_bp(p[0] + dx)), fmt4(pt_to_bp(p[1] + dy))]

    def path(pl):
        toks = []
        for i, p in enumerate(pl.points):
            toks += xy(p) + ["m" if i == 0 else "l"]
        return toks

    ops = []
    for d in drawables:
        if isinstance(d, Stroke):
            ops += [fmt4(pt_to_bp(d.width)), "w"] + _rgb(d.color) + ["RG"]
            ops += path(d.pl) + ["S"]
        elif isinstance(d, Fill):
            ops += _rgb(d.color) + ["rg"] + path(d.boundary) + ["f"]
        elif isinstance(d, Text):
            left = (d.anchor[0] - text_width(d.content, d.size) / 2, d.anchor[1])
            ops += _rgb(d.color) + ["rg", "BT", "/F1", fmt4(pt_to_bp(d.size)), "Tf"]
            ops += xy(left) + ["Td", f"({_escape(d.content)})", "Tj", "ET"]
    return ops


def _obj(n: int, body: bytes) -> bytes:
    return b"%d 0 obj\n" % n + body + b"\nendobj\n"


def emit_pdf(d: Diagram, tol: float = geom.DEFAULT_TOL) -> bytes:
    llx, lly, urx, ury = bounding_box(d)
    ops = PROLOGUE + content_ops(render_drawables(d, tol), -llx, -lly)
    stream = " ".join(ops).encode("latin-1")
    media = f"[0 0 {fmt4(pt_to_bp(urx - llx))} {fmt4(pt_to_bp(ury - lly))}]"
    bodies = [
        b"<< /Type /Catalog /Pages 2 0 R >>",
        b"<< /Type /Pages /Kids [3 0 R] /Count 1 >>",
        (f"<< /Type /Page /Parent 2 0 R /MediaBox {media} "
         f"/Resources << /Font << /F1 5 0 R >> >> /Contents 4 0 R >>").encode("ascii"),
        b"<< /Length %d >>\nstream\n" % len(stream) + stream + b"\nendstream",
        b"<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>",
    ]
    out = bytearray(b"%PDF-1.4\n%\xe2\xe3\xcf\xd3\n")
    offsets = []
    for n, body in enumerate(bodies, 1):
        offsets.append(len(out))
        out += _obj(n, body)
    xref = len(out)
    out += b"xref\n0 %d\n" % (len(bodies) + 1)
    out += b"0000000000 65535 f \n"
    for off in offsets:
        out += b"%010d 00000 n \n" % off
    out += b"trailer\n<< /Size %d /Root 1 0 R >>\n" % (len(bodies) + 1)
    out += b"startxref\n%d\n%%%%EOF\n" % xref
    return bytes(out)


_NUM = rb"[-+]?(?:\d+\.?\d*|\.\d+)"


def inspect_pdf(data: bytes) -> dict:
    """Re-read a PDF written by :func:`emit_pdf` and validate its structure.

    Returns the object count, MediaBox, declared and actual stream length and
    the content stream; raises :class:`PdfFormatError` on any inconsistency.
    """
    if not data.startswith(b"%PDF-1.4"):
        raise PdfFormatError("missing %PDF-1.4 header")
    if not data.rstrip().endswith(b"%%EOF"):
        raise PdfFormatError("missing %%EOF marker")
    mt = re.search(rb"startxref\s+(\d+)\s+%%EOF\s*$", data)
    if not mt:
        raise PdfFormatError("missing startxref")
    xref_at = int(mt.group(1))
    if not data.startswith(b"xref", xref_at):
        raise PdfFormatError(f"startxref {xref_at} does not point at the xref table")
    head = re.match(rb"xref\s+0\s+(\d+)\s+", data[xref_at:])
    if not head:
        raise PdfFormatError("malformed xref header")
    size = int(head.group(1))
    pos = xref_at + head.end()
    entries = []
    for _ in range(size):
        line = data[pos:pos + 20]
        em = re.fullmatch(rb"(\d{10}) (\d{5}) ([fn])(?: \n|\r\n| \r)", line)
        if not em:
            raise PdfFormatError(f"malformed xref entry at byte {pos}")
        entries.append((int(em.group(1)), em.group(3)))
        pos += 20
    objects = {}
    for n, (off, kind) in enumerate(entries):
        if kind != b"n":
            continue
        marker = b"%d 0 obj" % n
        if not data.startswith(marker, off):
            raise PdfFormatError(f"xref offset {off} for object {n} is wrong")
        end = data.index(b"endobj", off)
        objects[n] = data[off + len(marker):end]
    if sorted(objects) != list(range(1, size)):
        raise PdfFormatError("object ids are not dense from 1")

    page = next((body for body in objects.values() if b"/Type /Page " in body), None)
    if page is None:
        raise PdfFormatError("no page object")
    mb = re.search(rb"/MediaBox\s*\[\s*(" + _NUM + rb")\s+(" + _NUM + rb")\s+(" + _NUM
                   + rb")\s+(" + _NUM + rb")\s*\]", page)
    if not mb:
        raise PdfFormatError("page has no MediaBox")
    cref = re.search(rb"/Contents\s+(\d+)\s+0\s+R", page)
    if not cref or int(cref.group(1)) not in objects:
        raise PdfFormatError("page has no content stream")
    body = objects[int(cref.group(1))]
    sm = re.search(rb"/Length\s+(\d+)\s*>>\s*stream\n", body)
    if not sm:
        raise PdfFormatError("content stream has no /Length")
    declared = int(sm.group(1))
    rest = body[sm.end():]
    stop = rest.rfind(b"\nendstream")
    if stop < 0:
        raise PdfFormatError("unterminated stream")
    content = rest[:stop]
    if len(content) != declared:
        raise PdfFormatError(f"stream /Length {declared} but {len(content)} bytes present")
    return {
        "object_count": len(objects),
        "media_box": tuple(float(v) for v in mb.groups()),
        "stream_length": declared,
        "content": content,
    }
