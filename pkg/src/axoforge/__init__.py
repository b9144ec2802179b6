"""axoforge: compile axodraw2 Feynman-diagram source to SVG and PDF."""

from .backends import emit_pdf, emit_svg, pt_to_bp
from .compat import process_ax1, read_ax1
from .model import Diagram, color_lookup, resolve_options
from .parser import ParseError, parse_command, parse_document, serialize
from .stroker import realize, render_drawables

__version__ = "0.1.0"

__all__ = [
    "Diagram", "ParseError", "color_lookup", "emit_pdf", "emit_svg", "parse_command",
    "parse_document", "process_ax1", "pt_to_bp", "read_ax1", "realize",
    "render_drawables", "resolve_options", "serialize",
]
