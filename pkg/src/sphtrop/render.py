"""Deterministic SVG pictures of 2-D fans and of complexes in dimension 1 or 2.

Drawing uses floats; the geometry is clipped exactly before conversion, and
nothing is ever read back from the output.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .colored_fans import ColoredFan
from .errors import DimensionMismatch
from .fan_builder import ToricFan
from .qpoly import Cone, PolyhedralComplex, Polyhedron

SIZE = 400
RADIUS = 160
CENTER = SIZE / 2

SHADE = "#d9d9d9"
VAL_SHADE = "#cfe3f7"
INK = "#222222"
CELL = "#c0392b"


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Canvas:
    def __init__(self, title: str = ""):
        self.items: list[str] = []
        self.title = title

    def to_px(self, p: Sequence[float]) -> tuple[float, float]:
        x = p[0] if len(p) > 0 else 0.0
        y = p[1] if len(p) > 1 else 0.0
        return CENTER + x, CENTER - y

    def polygon(self, pts: Sequence[Sequence[float]], fill: str, opacity: float = 1.0):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (self.to_px(p) for p in pts))
        self.items.append(f'<polygon points="{coords}" fill="{fill}" fill-opacity="{_fmt(opacity)}" stroke="none"/>')

    def line(self, a, b, color: str = INK, width: float = 2, arrow: bool = False):
        (x1, y1), (x2, y2) = self.to_px(a), self.to_px(b)
        marker = ' marker-end="url(#arrow)"' if arrow else ""
        self.items.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{color}" stroke-width="{_fmt(width)}"{marker}/>'
        )

    def dot(self, p, r: float = 3, fill: str = INK):
        x, y = self.to_px(p)
        self.items.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" fill="{fill}"/>')

    def ring(self, p, r: float = 7, color: str = INK):
        x, y = self.to_px(p)
        self.items.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" fill="white" stroke="{color}" stroke-width="2"/>'
        )

    def text(self, p, s: str, dx: float = 6, dy: float = -6):
        x, y = self.to_px(p)
        self.items.append(
            f'<text x="{_fmt(x + dx)}" y="{_fmt(y + dy)}" font-family="sans-serif" font-size="12">{_escape(s)}</text>'
        )

    def svg(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
            f'viewBox="0 0 {SIZE} {SIZE}">'
        )
        defs = (
            '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" '
            'markerHeight="6" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="#222222"/>'
            "</marker></defs>"
        )
        title = f"<title>{_escape(self.title)}</title>" if self.title else ""
        bg = f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>'
        return "\n".join([head, title + defs, bg, *self.items, "</svg>"]) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _box(dim: int, b: Fraction) -> Polyhedron:
    ineqs = []
    for i in range(dim):
        e = tuple(int(i == j) for j in range(dim))
        ineqs.append((e, -b))
        ineqs.append((tuple(-x for x in e), -b))
    return Polyhedron.from_inequalities(dim, ineqs)


def _ordered(pts: list[tuple[float, float]]) -> list[tuple[float, float]]:
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    return sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def _draw_clipped(canvas: _Canvas, p: Polyhedron, box: Polyhedron, scale: float, fill: str, stroke: str):
    clipped = p.intersection(box)
    if clipped.is_empty():
        return
    pts = [tuple(float(x) * scale for x in v) for v in clipped.vertices]
    if len(pts[0]) == 1:
        pts = [(x[0], 0.0) for x in pts]
    d = clipped.dimension
    if d == 0:
        canvas.dot(pts[0], 4, stroke)
    elif d == 1:
        a, b = min(pts), max(pts)
        canvas.line(a, b, stroke, 3)
    else:
        canvas.polygon(_ordered(pts), fill, 0.6)


def _unit(v: Sequence) -> tuple[float, float]:
    x = [float(t) for t in v] + [0.0] * (2 - len(v))
    n = math.hypot(x[0], x[1])
    return (0.0, 0.0) if n == 0 else (x[0] / n, x[1] / n)


def _require_small(dim: int, what: str):
    if dim > 2:
        raise DimensionMismatch(f"cannot draw {what} of dimension {dim}; only 1 and 2 are supported")


def _draw_cones(canvas: _Canvas, cones: Iterable[Cone], fill: str, label_rays: dict | None = None):
    box = _box(2, Fraction(1))
    cones = list(cones)
    for c in cones:
        if c.dimension == 2:
            _draw_clipped(canvas, Polyhedron.from_cone(c), box, RADIUS, fill, INK)
    rays = sorted({r for c in cones for r in c.rays})
    lines = sorted({l for c in cones for l in c.lineality})
    for r in rays:
        u = _unit(r)
        canvas.line((0, 0), (u[0] * RADIUS, u[1] * RADIUS), INK, 2, arrow=True)
        if label_rays and r in label_rays:
            canvas.text((u[0] * RADIUS, u[1] * RADIUS), label_rays[r])
    for l in lines:
        u = _unit(l)
        canvas.line((-u[0] * RADIUS, -u[1] * RADIUS), (u[0] * RADIUS, u[1] * RADIUS), INK, 2)
    canvas.dot((0, 0))


def render_fan(fan: ColoredFan | ToricFan, title: str = "") -> str:
    """Fan picture: shaded 2-cones, rays to a fixed radius, colors as rings."""
    _require_small(fan.dim, "a fan")
    canvas = _Canvas(title)
    if isinstance(fan, ColoredFan):
        _lift_1d(canvas, fan.dim)
        box = _box(fan.dim, Fraction(1))
        _draw_clipped(canvas, Polyhedron.from_cone(fan.valuation_cone), box, RADIUS, VAL_SHADE, "#5b8fc7")
        cones = [cc.sigma for cc in fan.all_cones()]
        _draw_cones(canvas, _as_2d(cones), SHADE)
        for color in fan.palette.colors:
            u = _unit(color.rho)
            canvas.ring((u[0] * RADIUS * 0.6, u[1] * RADIUS * 0.6))
            canvas.text((u[0] * RADIUS * 0.6, u[1] * RADIUS * 0.6), color.id, 9, 4)
    else:
        names = {}
        if fan.layout is not None:
            for i, n in enumerate(fan.layout.coordinate_names()):
                names[fan.layout.unit(i)] = n
        _draw_cones(canvas, _as_2d(fan.cones()), SHADE, names)
    return canvas.svg()


def render_valuation_cone(V: Cone, palette=None, title: str = "") -> str:
    _require_small(V.dim, "a valuation cone")
    canvas = _Canvas(title)
    _lift_1d(canvas, V.dim)
    _draw_clipped(canvas, Polyhedron.from_cone(V), _box(V.dim, Fraction(1)), RADIUS, VAL_SHADE, "#5b8fc7")
    for l in V.lineality:
        u = _unit(l)
        canvas.line((-u[0] * RADIUS, -u[1] * RADIUS), (u[0] * RADIUS, u[1] * RADIUS), "#5b8fc7", 2)
    for r in V.rays:
        u = _unit(r)
        canvas.line((0, 0), (u[0] * RADIUS, u[1] * RADIUS), "#5b8fc7", 2, arrow=True)
    if palette is not None:
        for color in palette.colors:
            u = _unit(color.rho)
            canvas.ring((u[0] * RADIUS * 0.6, u[1] * RADIUS * 0.6))
            canvas.text((u[0] * RADIUS * 0.6, u[1] * RADIUS * 0.6), color.id, 9, 4)
    canvas.dot((0, 0))
    return canvas.svg()


def render_complex(c: PolyhedralComplex, title: str = "") -> str:
    """Cells clipped to a box around their vertices; dimension 1 uses a number line."""
    _require_small(c.dim, "a complex")
    canvas = _Canvas(title)
    coords = [abs(x) for cell in c.cells for v in cell.vertices for x in v]
    bound = max([Fraction(1)] + [2 * x for x in coords])
    bound = Fraction(math.ceil(bound))
    scale = RADIUS / float(bound)
    _lift_1d(canvas, c.dim)
    box = _box(c.dim, bound)
    for cell in c.cells:
        _draw_clipped(canvas, cell, box, scale, CELL, CELL)
    canvas.dot((0, 0), 2)
    return canvas.svg()


def _lift_1d(canvas: _Canvas, dim: int):
    if dim == 1:
        canvas.line((-RADIUS - 10, 0), (RADIUS + 10, 0), "#999999", 1)


def _as_2d(cones: list[Cone]) -> list[Cone]:
    if not cones or cones[0].dim == 2:
        return cones
    if cones[0].dim != 1:
        return cones
    return [Cone.from_generators(2, [(r[0], 0) for r in c.rays], [(l[0], 0) for l in c.lineality]) for c in cones]


def render_svg(obj, dim: int | None = None, title: str = "", palette=None) -> str:
    """Dispatch on the object type; ``dim`` only guards against surprises."""
    if dim is not None and getattr(obj, "dim", dim) != dim:
        raise DimensionMismatch(f"object lives in dimension {obj.dim}, not {dim}")
    if isinstance(obj, (ColoredFan, ToricFan)):
        return render_fan(obj, title)
    if isinstance(obj, PolyhedralComplex):
        return render_complex(obj, title)
    if isinstance(obj, Cone):
        return render_valuation_cone(obj, palette, title)
    raise TypeError(f"cannot render {type(obj).__name__}")
