"""SVG figures.  Exact coordinates are converted to floats only here."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .cylinders import CylinderDecomposition
from .fuchsian import F, FundDomain
from .surface import DirVec

__all__ = ["fmt", "decomposition_svg", "domain_svg", "strip_polygon"]

# fill colours cycle; each cylinder gets its own index
_PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
)


def fmt(x) -> str:
    """Float text with 12 significant digits."""
    v = float(x)
    if v == 0:
        v = 0.0  # no "-0"
    return f"{v:.12g}"


def _hsl(i: int) -> str:
    if i < len(_PALETTE):
        return _PALETTE[i]
    # beyond the palette: spread hues by the golden angle
    return f"hsl({(i * 137.508) % 360:.3f},55%,55%)"


def strip_polygon(d: DirVec, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Vertices of ``{lo <= q*y - p*x <= hi}`` inside the unit square, in order."""
    poly = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(1), Fraction(1)), (Fraction(0), Fraction(1))]

    def clip(pts, f):
        # keep f >= 0 (Sutherland-Hodgman, exact)
        out = []
        for i, cur in enumerate(pts):
            prev = pts[i - 1]
            fc, fp = f(cur), f(prev)
            if fc >= 0:
                if fp < 0:
                    out.append(_cut(prev, cur, fp, fc))
                out.append(cur)
            elif fp >= 0:
                out.append(_cut(prev, cur, fp, fc))
        return out

    poly = clip(poly, lambda v: d.tau(v[0], v[1]) - lo)
    poly = clip(poly, lambda v: hi - d.tau(v[0], v[1]))
    dedup = []
    for v in poly:
        if not dedup or dedup[-1] != v:
            dedup.append(v)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def _cut(a, b, fa, fb):
    t = fa / (fa - fb)
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def _pt(x, y) -> str:
    # flip y so the square's origin is bottom-left
    return f"{fmt(x)},{fmt(1 - Fraction(y))}"


def decomposition_svg(dec: CylinderDecomposition) -> str:
    d = dec.direction
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 1 1" width="600" height="600">',
        f"<title>Cylinder decomposition in direction ({d.q}, {d.p}), depth {dec.depth}</title>",
        f"<desc>covered area {dec.covered_area} ({len(dec.cylinders)} cylinders)</desc>",
        '<rect x="0" y="0" width="1" height="1" fill="#ffffff" stroke="none"/>',
    ]
    for i, cyl in enumerate(dec.cylinders):
        out.append(
            f'<g class="cylinder" id="cyl{i}" fill="{_hsl(i)}" fill-opacity="0.6" stroke="none" '
            f'data-kind="{cyl.kind}" data-modulus="{cyl.modulus}">'
        )
        for s in cyl.strips:
            pts = " ".join(_pt(x, y) for x, y in strip_polygon(d, s.lo, s.hi))
            out.append(f'<polygon points="{pts}"/>')
        out.append("</g>")
    out.append('<g class="saddle-connections" stroke="#000000" stroke-width="0.002" fill="none">')
    for sc in dec.connections:
        for pc in sc.pieces:
            out.append(
                f'<line x1="{fmt(pc.start.x)}" y1="{fmt(1 - pc.start.y)}" '
                f'x2="{fmt(pc.end.x)}" y2="{fmt(1 - pc.end.y)}"/>'
            )
    out.append("</g>")
    out.append('<rect x="0" y="0" width="1" height="1" fill="none" stroke="#000000" stroke-width="0.004"/>')
    out.append(
        f'<text x="0.01" y="0.99" font-size="0.025" font-family="sans-serif">'
        f"covered area {escape(str(dec.covered_area))}</text>"
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def domain_svg(domain: FundDomain = F, strip_only: bool = False, annulus: bool = False) -> str:
    """The fundamental domain in the upper half plane; 1 unit = 100 px."""
    b = domain.strip_bound
    xmin, xmax = -(b + 1), b + 1
    ymax = b + 1
    scale = 100

    def px(x) -> str:
        return fmt((Fraction(x) - xmin) * scale)

    def py(y) -> str:
        return fmt((ymax - Fraction(y)) * scale)

    width = (xmax - xmin) * scale
    height = (ymax + Fraction(1, 2)) * scale
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {fmt(width)} {fmt(height)}" '
        f'width="{fmt(width)}" height="{fmt(height)}">',
        "<title>Fundamental domain</title>",
        f'<line class="real-axis" x1="{px(xmin)}" y1="{py(0)}" x2="{px(xmax)}" y2="{py(0)}" stroke="#888888" stroke-width="1"/>',
    ]
    walls = ['<g class="walls" stroke="#000000" stroke-width="2" fill="none">']
    for x in (-b, b):
        walls.append(f'<line class="strip-wall" x1="{px(x)}" y1="{py(0)}" x2="{px(x)}" y2="{py(ymax)}"/>')
    if not strip_only:
        for lo, hi in domain.inner_walls:
            r = (hi - lo) / 2
            walls.append(
                f'<path class="inner-wall" data-endpoints="{lo},{hi}" '
                f'd="M {px(lo)} {py(0)} A {fmt(r * scale)} {fmt(r * scale)} 0 0 1 {px(hi)} {py(0)}"/>'
            )
    walls.append("</g>")
    out.extend(walls)
    if annulus:
        out.append('<g class="annulus" stroke="#4e79a7" stroke-width="1.5" stroke-dasharray="6,4" fill="none">')
        for r in (Fraction(1, 2), Fraction(2)):
            out.append(
                f'<path class="annulus-circle" data-radius="{r}" '
                f'd="M {px(-r)} {py(0)} A {fmt(r * scale)} {fmt(r * scale)} 0 0 1 {px(r)} {py(0)}"/>'
            )
        out.append("</g>")
    labels = ['<g class="labels" font-size="14" font-family="sans-serif" text-anchor="middle">']
    ends = [-b, b] if strip_only else sorted({e for w in domain.inner_walls for e in w})
    for e in ends:
        labels.append(f'<text class="endpoint" x="{px(e)}" y="{fmt((ymax + Fraction(1, 4)) * scale)}">{e}</text>')
    if not strip_only:
        lo, hi = domain.free_side
        out.append(
            f'<line class="free-side" x1="{px(lo)}" y1="{py(0)}" x2="{px(hi)}" y2="{py(0)}" '
            'stroke="#e15759" stroke-width="4"/>'
        )
        for c in domain.cusps:
            if c == "oo":
                labels.append(f'<text class="cusp" x="{px(0)}" y="{fmt(scale // 4)}">cusp oo</text>')
            else:
                labels.append(f'<circle class="cusp" cx="{px(c)}" cy="{py(0)}" r="4" fill="#000000"/>')
    labels.append("</g>")
    out.extend(labels)
    out.append("</svg>")
    return "\n".join(out) + "\n"
