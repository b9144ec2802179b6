"""Document writers: SVG with pt as the native unit, PDF in big points."""

from .pdf import content_ops, emit_pdf, inspect_pdf
from .svg import emit_svg
from .units import fmt4, pt_to_bp

__all__ = ["content_ops", "emit_pdf", "emit_svg", "fmt4", "inspect_pdf", "pt_to_bp"]
