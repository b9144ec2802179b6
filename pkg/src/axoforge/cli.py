"""Command-line front end.

Exit status: 0 on success, 1 for bad input (diagnostics on stderr), 2 for
usage errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import geom
from . import model as m
from .backends import emit_pdf, emit_svg, fmt4
from .compat import process_ax1
from .errors import AxoforgeError
from .parser import ParseError, parse_document

FORMATS = ("svg", "pdf")


class _UsageError(Exception):
    pass


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="axoforge", description="Compile axodraw2 diagram source to SVG or PDF.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    render = sub.add_parser("render", help="compile .axo files to SVG or PDF")
    render.add_argument("inputs", nargs="+", type=Path, metavar="INPUT")
    render.add_argument("-o", "--output", type=Path,
                        help="output file (single input only)")
    render.add_argument("--format", choices=FORMATS,
                        help="output format (default: from the output extension)")
    render.add_argument("--tol", type=_positive_float, default=geom.DEFAULT_TOL,
                        help="flattening tolerance in pt (default: %(default)s)")
    render.add_argument("--grid", type=_positive_float, metavar="CELL",
                        help="overlay a layout grid with this cell size in pt")

    check = sub.add_parser("check", help="parse .axo files and report problems")
    check.add_argument("inputs", nargs="+", type=Path, metavar="INPUT")

    compat = sub.add_parser("compat", help="process NAME.ax1 into NAME.ax2")
    compat.add_argument("name")
    compat.add_argument("--tol", type=_positive_float, default=geom.DEFAULT_TOL)

    sub.add_parser("colors", help="list the named colors")
    return parser


def _read(path: Path) -> str:
    return path.read_bytes().decode("utf-8")


def _diagnostic(path, exc: Exception, source: str = None) -> str:
    if isinstance(exc, ParseError):
        sp = exc.span
        msg = f"{path}:{sp.line}:{sp.column}: error: {exc.message}"
        if source is not None:
            lines = source.splitlines()
            if 0 < sp.line <= len(lines):
                msg += "\n  " + lines[sp.line - 1] + "\n  " + " " * (sp.column - 1) \
                    + "^" * max(sp.length, 1)
        return msg
    if isinstance(exc, UnicodeDecodeError):
        return f"{path}: error: not valid UTF-8 (byte {exc.start})"
    if isinstance(exc, OSError):
        return f"{path}: error: {exc.strerror or exc}"
    if isinstance(exc, AxoforgeError):
        return f"{path}: error: {exc}"
    return f"{path}: internal error: {type(exc).__name__}: {exc}"


def with_grid(d: m.Diagram, cell: float) -> m.Diagram:
    c = d.canvas
    cols = max(1, math.ceil(c.width * c.scale / cell))
    rows = max(1, math.ceil(c.height * c.scale / cell))
    grid = m.Grid(c.origin, cell, cell, cols, rows)
    return m.Diagram(c, (grid,) + d.items)


def _output_format(args, output: Path) -> str:
    if args.format:
        return args.format
    ext = output.suffix.lower().lstrip(".")
    if ext in FORMATS:
        return ext
    raise _UsageError(f"cannot infer the output format from {str(output)!r}; use --format")


def _render_one(src_path: Path, out_path: Path, fmt: str, args):
    source = None
    try:
        source = _read(src_path)
        diagram = parse_document(source)
        if args.grid:
            diagram = with_grid(diagram, args.grid)
        if fmt == "svg":
            out_path.write_text(emit_svg(diagram, args.tol), encoding="utf-8")
        else:
            out_path.write_bytes(emit_pdf(diagram, args.tol))
    except Exception as exc:  # every failure becomes a diagnostic, never a traceback
        return _diagnostic(src_path, exc, source)
    return None


def _cmd_render(args) -> int:
    if args.output is not None:
        if len(args.inputs) > 1:
            raise _UsageError("-o/--output needs exactly one input")
        jobs = [(args.inputs[0], args.output, _output_format(args, args.output))]
    else:
        fmt = args.format or "svg"
        jobs = [(p, p.with_suffix("." + fmt), fmt) for p in args.inputs]
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda job: _render_one(*job, args), jobs))
    failed = [r for r in results if r]
    for r in failed:
        print(r, file=sys.stderr)
    return 1 if failed else 0


def _cmd_check(args) -> int:
    status = 0
    for path in args.inputs:
        source = None
        try:
            source = _read(path)
            d = parse_document(source)
        except Exception as exc:
            print(_diagnostic(path, exc, source), file=sys.stderr)
            status = 1
            continue
        print(f"{path}: ok, canvas {fmt4(d.canvas.width)}x{fmt4(d.canvas.height)}, "
              f"{len(d.items)} items")
    return status


def _cmd_compat(args) -> int:
    base = args.name[:-4] if args.name.endswith(".ax1") else args.name
    src, dst = Path(base + ".ax1"), Path(base + ".ax2")
    try:
        dst.write_text(process_ax1(_read(src), args.tol), encoding="utf-8")
    except Exception as exc:
        print(_diagnostic(src, exc), file=sys.stderr)
        return 1
    return 0


def _cmd_colors(args) -> int:
    for name, c in m.color_table().items():
        print(f"{name}\t{fmt4(c.r)}\t{fmt4(c.g)}\t{fmt4(c.b)}")
    return 0


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    handler = {"render": _cmd_render, "check": _cmd_check,
               "compat": _cmd_compat, "colors": _cmd_colors}[args.command]
    try:
        return handler(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"axoforge: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
