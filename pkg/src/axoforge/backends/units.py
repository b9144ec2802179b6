"""Unit conversion and number printing shared by the backends."""

# TeX point: 1/72.27 in; PDF/PostScript big point: 1/72 in.
BP_PER_IN = 72.0
PT_PER_IN = 72.27


def pt_to_bp(x: float) -> float:
    return x * BP_PER_IN / PT_PER_IN


def fmt4(x: float) -> str:
    """Fixed 4 decimals with trailing zeros (and a bare point) removed."""
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s
