"""Static SVG pictures of decompositions.  Output is byte-for-byte deterministic."""

from __future__ import annotations

from typing import Sequence

from .engine import CEnumeration, Decomposition
from .group import GroupElement
from .kernel import to_float
from .product import ProductDecomposition, RationalMatrix

_W = 800
_MARGIN = 40


def _f(x: float) -> str:
    return f"{x:.3f}"


def _header(width: int, height: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]


def decomposition_svg(d: Decomposition, n_basis: int = 20, lane: int = 10) -> str:
    """One lane per translate, a dot at ``a_j + b_n`` for every ``n <= n_basis``."""
    basis = d.basis
    basis.ensure(n_basis)
    lo, hi = to_float(d.J.lo, basis), to_float(d.J.hi, basis)
    span = hi - lo
    height = 2 * _MARGIN + lane * max(1, len(d.translates))

    def sx(v: float) -> float:
        return _MARGIN + (v - lo) / span * (_W - 2 * _MARGIN)

    out = _header(_W, height)
    for v, closed in ((lo, d.J.lo_closed), (hi, d.J.hi_closed)):
        dash = "" if closed else ' stroke-dasharray="4,3"'
        out.append(f'<line x1="{_f(sx(v))}" y1="{_MARGIN // 2}" x2="{_f(sx(v))}" '
                   f'y2="{height - _MARGIN // 2}" stroke="black"{dash}/>')
    out.append(f'<text x="{_MARGIN}" y="{_MARGIN // 2 - 4}" font-size="11" font-family="monospace">'
               f'J = {d.J.to_text()}  epsilon = {d.epsilon}  translates = {len(d.translates)}</text>')
    for j, t in enumerate(d.translates):
        y = _MARGIN + lane * j + lane / 2
        xs = [to_float(t.element(n), basis) for n in range(n_basis + 1)]
        out.append(f'<line x1="{_f(sx(xs[0]))}" y1="{_f(y)}" x2="{_f(sx(xs[1]))}" y2="{_f(y)}" '
                   f'stroke="#bbbbbb" stroke-width="0.5"/>')
        for n, v in enumerate(xs):
            colour = "#c0392b" if n < 2 else "#2c3e50"
            out.append(f'<circle cx="{_f(sx(v))}" cy="{_f(y)}" r="1.5" fill="{colour}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def product_svg(prod: ProductDecomposition, enumerations: Sequence[CEnumeration],
                n_points: int, T: RationalMatrix | None = None) -> str:
    """2-D picture: the hull of each product translate and the grid of enumerated points."""
    if prod.dimension != 2:
        raise ValueError("product plots are two-dimensional")
    bases = [d.basis for d in prod.axes]
    T = T or RationalMatrix.identity(2)
    m = [[float(x) for x in r] for r in T.rows]

    def tx(u: float, v: float) -> tuple[float, float]:
        return m[0][0] * u + m[0][1] * v, m[1][0] * u + m[1][1] * v

    polys = []
    for t in prod.translates:
        (a0, a1), (c0, c1) = [
            (to_float(a + GroupElement.unit(0), b), to_float(a + GroupElement.unit(1), b))
            for a, b in zip(t.offsets, bases)
        ]
        polys.append([tx(a0, c0), tx(a1, c0), tx(a1, c1), tx(a0, c1)])
    pts = []
    axes = [e.extend(n_points).emitted[:n_points] for e in enumerations]
    for g in axes[0]:
        for h in axes[1]:
            pts.append(tx(to_float(g, bases[0]), to_float(h, bases[1])))
    xs = [p[0] for poly in polys for p in poly] + [p[0] for p in pts]
    ys = [p[1] for poly in polys for p in poly] + [p[1] for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    scale = (_W - 2 * _MARGIN) / max(x1 - x0, y1 - y0, 1e-12)
    size = int(2 * _MARGIN + scale * max(x1 - x0, y1 - y0)) + 1

    def s(p: tuple[float, float]) -> str:
        return f"{_f(_MARGIN + (p[0] - x0) * scale)},{_f(size - _MARGIN - (p[1] - y0) * scale)}"

    out = _header(size, size)
    for poly in polys:
        out.append(f'<polygon points="{" ".join(s(p) for p in poly)}" fill="none" '
                   f'stroke="#2c3e50" stroke-width="0.6"/>')
    for p in pts:
        x, y = s(p).split(",")
        out.append(f'<circle cx="{x}" cy="{y}" r="2" fill="#c0392b"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
