"""Deterministic SVG rendering of 2D projections of rational polytopes."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .polytopes import RatPolytope, project2d

__all__ = ["emit_svg", "fmt12"]

SIZE = 400
PAD = 20
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def fmt12(x) -> str:
    """Exact rational rendered at 12 significant digits, no exponent noise."""
    s = f"{float(x):.12g}"
    return "0" if s == "-0" else s


def emit_svg(polytopes: Sequence[RatPolytope], axes: tuple[int, int] = (0, 1),
             labels: Sequence[str] | None = None) -> str:
    """One ``<polygon>`` per polytope projection, in input order.

    Segments and points are drawn as degenerate polygons so every polytope
    maps to exactly one element. The y axis points up.
    """
    polys = [project2d(P, axes) for P in polytopes]
    pts = [p for poly in polys for p in poly]
    if pts:
        x0 = min(p[0] for p in pts)
        x1 = max(p[0] for p in pts)
        y0 = min(p[1] for p in pts)
        y1 = max(p[1] for p in pts)
    else:
        x0 = y0 = Fraction(0)
        x1 = y1 = Fraction(1)
    span = max(x1 - x0, y1 - y0) or Fraction(1)
    scale = Fraction(SIZE - 2 * PAD) / span

    def tx(p):
        return (PAD + (p[0] - x0) * scale, SIZE - PAD - (p[1] - y0) * scale)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'  <desc>projection on axes {axes[0]} {axes[1]}; data box '
        f'[{fmt12(x0)}, {fmt12(x1)}] x [{fmt12(y0)}, {fmt12(y1)}]</desc>',
    ]
    for k, poly in enumerate(polys):
        coords = " ".join(f"{fmt12(a)},{fmt12(b)}" for a, b in map(tx, poly))
        color = PALETTE[k % len(PALETTE)]
        label = labels[k] if labels else f"P{k}"
        lines.append(f'  <polygon id="{label}" points="{coords}" fill="{color}" fill-opacity="0.35" '
                     f'stroke="{color}" stroke-width="1.5"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
