"""Spherical tropicalization through the toric variety Z_0 and its embeddings.

Points of N_Q are written (a_11, ..., a_rs_r, b_1, ..., b_m); psi takes the
minimum of each block a_i1..a_is_i and keeps the b_k. On a boundary orbit of
Σ_Z with provenance (σ, 𝔞) the coordinates indexed by 𝔞 are infinite, so the
block minimum only runs over j with v_ij ∉ 𝔞.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from ._parallel import pmap
from .colored_fans import ColoredCone, ColoredFan, is_polyhedral, relint_meets
from .errors import DimensionMismatch, DomainError
from .fan_builder import LatticeLayout, LiftData, ToricFan, build_fan_Z
from .qpoly import (
    INF,
    Cone,
    LinearMap,
    PolyhedralComplex,
    Polyhedron,
    as_fraction,
    covers,
    dot,
    ext,
    ext_min,
    linear_image,
    preimage,
    same_support,
)
from .trop_engine import (
    ExtendedPoint,
    PrevarietyOnlyWarning,
    TropicalPolynomial,
    evaluate,
    extended_closure,
    prevariety,
    quotient_map,
)


@dataclass(frozen=True)
class SpaceDescriptor:
    layout: LatticeLayout
    generators: tuple[TropicalPolynomial, ...] = ()
    lift: LiftData | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.nvars != self.layout.big_dim:
                raise DimensionMismatch(
                    f"generator has {g.nvars} variables, the layout has {self.layout.big_dim} coordinates"
                )

    @property
    def palette(self):
        return self.layout.palette()


# -- psi ----------------------------------------------------------------


def omega(layout: LatticeLayout, excluded: Iterable[int] = ()) -> Iterator[tuple]:
    """Choices ω(i) of one coordinate per block avoiding ``excluded``.

    Blocks lying entirely in ``excluded`` get ``None``.
    """
    excluded = set(excluded)
    choices = []
    for blk in layout.blocks():
        free = [x for x in blk if x not in excluded]
        choices.append(free or [None])
    return product(*choices)


def psi_linear(layout: LatticeLayout, w: Sequence) -> LinearMap:
    """The linear map N -> 𝒩 reading coordinate w(i) in block i (0 if None) and all b_k."""
    n = layout.big_dim
    rows = [[int(c == j) for c in range(n)] if j is not None else [0] * n for j in w]
    rows += [[int(c == layout.w_index(k)) for c in range(n)] for k in range(layout.m)]
    return LinearMap.from_rows(rows, n) if rows else LinearMap((), n, 0)


def omega_region(layout: LatticeLayout, w: Sequence, excluded: Iterable[int] = ()) -> list[tuple[tuple, int]]:
    """Inequalities a_k - a_w(i) >= 0 for k in block i outside ``excluded``."""
    excluded = set(excluded)
    n = layout.big_dim
    out = []
    for j, blk in zip(w, layout.blocks()):
        if j is None:
            continue
        for k in blk:
            if k != j and k not in excluded:
                out.append((tuple(int(c == k) - int(c == j) for c in range(n)), 0))
    return out


def psi(point: Sequence, layout: LatticeLayout) -> tuple[Fraction, ...]:
    """Block-wise minimum; entries may be INF (or "inf") inside blocks."""
    pt = [ext(x) for x in point]
    if len(pt) != layout.big_dim:
        raise DimensionMismatch(f"point has {len(pt)} coordinates, expected {layout.big_dim}")
    out = []
    for i, blk in enumerate(layout.blocks()):
        v = ext_min(pt[x] for x in blk)
        if v is INF:
            raise DomainError(f"block {i + 1} is entirely infinite")
        out.append(v)
    for k in range(layout.m):
        v = pt[layout.w_index(k)]
        if v is INF:
            raise DomainError(f"coordinate b_{k + 1} is infinite")
        out.append(v)
    return tuple(out)


def _psi_cells(cells: Iterable[Polyhedron], layout: LatticeLayout, excluded: frozenset = frozenset()):
    cells = list(cells)
    out = []
    for w in omega(layout, excluded):
        region = omega_region(layout, w, excluded)
        L = psi_linear(layout, w)
        for cell in cells:
            piece = cell.intersection(Polyhedron.from_inequalities(layout.big_dim, region)) if region else cell
            if not piece.is_empty():
                out.append(linear_image(L, piece))
    return out


def psi_complex(c: PolyhedralComplex, layout: LatticeLayout) -> PolyhedralComplex:
    """Image of the finite part of a complex under psi, cell by linearity region."""
    if c.dim != layout.big_dim:
        raise DimensionMismatch("complex does not live in N_Q of the layout")
    return PolyhedralComplex(layout.small_dim, _psi_cells(c.cells, layout))


# -- valuation cone and tropicalization of subvarieties --------------------


def _hull(cells: Sequence[Polyhedron], dim: int) -> Polyhedron:
    pts, rays, lines = [], [], []
    for c in cells:
        pts += c.vertices
        rays += c.rays
        lines += c.lines
    return Polyhedron.from_generators(dim, pts, rays, lines)


def _gen_prevariety(d: SpaceDescriptor, extra: Sequence[TropicalPolynomial] = ()) -> PolyhedralComplex:
    return prevariety(list(d.generators) + list(extra), d.layout.big_dim)


def valuation_cone(d: SpaceDescriptor) -> Cone:
    """trop(G/H ∩ T) ∩ 𝒩_Q, pulled back along the inclusion; must be a convex cone."""
    layout = d.layout
    inc = layout.inc()
    trop = _gen_prevariety(d)
    cells = [preimage(inc, cell) for cell in trop.cells]
    cells = [c for c in cells if not c.is_empty()]
    if not cells:
        raise DomainError("the prevariety misses the image of the valuation lattice")
    hull = _hull(cells, layout.small_dim)
    if not covers(hull, cells):
        raise DomainError("union of the pulled-back cells is not convex")
    rec = hull.recession_cone()
    if Polyhedron.from_cone(rec) != hull:
        raise DomainError("union of the pulled-back cells is convex but not a cone")
    return rec


def _check_layout(d: SpaceDescriptor, gens: Sequence[TropicalPolynomial]):
    for g in gens:
        if g.nvars != d.layout.big_dim:
            raise DimensionMismatch(f"generator with {g.nvars} variables vs layout with {d.layout.big_dim}")


def trop_subvariety(d: SpaceDescriptor, gens: Sequence[TropicalPolynomial] = ()) -> PolyhedralComplex:
    """psi of the prevariety of the ideal generators together with ``gens``."""
    _check_layout(d, gens)
    return psi_complex(_gen_prevariety(d, gens), d.layout)


def trop_subvariety_lifted(d: SpaceDescriptor, gens: Sequence[TropicalPolynomial] = ()) -> PolyhedralComplex:
    """Push the spherical tropicalization of the lift down along pi_*."""
    if d.lift is None:
        raise DomainError("descriptor carries no lift data")
    return linear_image(d.lift.pi_star, trop_subvariety(d, gens))


# -- psi-bar -------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedGValuation:
    """A point of the G-orbit of ``cone``: finite part modulo span(cone.sigma)."""

    cone: ColoredCone
    finite: tuple[Fraction, ...]

    def __post_init__(self):
        red = self.cone.sigma.span().reduce(tuple(as_fraction(x) for x in self.finite))
        object.__setattr__(self, "finite", tuple(Fraction(x) for x in red))

    def __call__(self, m: Sequence[int]):
        sigma = self.cone.sigma
        gens = sigma.generators
        if any(dot(m, g) < 0 for g in gens):
            raise DomainError(f"{tuple(m)} is not in the dual of {sigma!r}")
        if all(dot(m, g) == 0 for g in gens):
            return Fraction(dot(self.finite, m))
        return INF

    def quotient_coordinates(self) -> tuple[Fraction, ...]:
        return tuple(self.finite[f] for f in self.cone.sigma.span().free)


def _fully_excluded_blocks(layout: LatticeLayout, a: frozenset) -> list[int]:
    return [i for i, blk in enumerate(layout.blocks()) if set(blk) <= a]


def psi_bar(mu: ExtendedPoint, fan: ToricFan) -> ExtendedGValuation:
    """Block minima over j with v_ij ∉ 𝔞; fully infinite blocks contribute 0 (they are colored)."""
    layout = fan.layout
    cc, a = fan.origin(mu.cone)
    x = mu.representative
    y = []
    for blk in layout.blocks():
        free = [x[k] for k in blk if k not in a]
        y.append(min(free) if free else Fraction(0))
    y += [x[layout.w_index(k)] for k in range(layout.m)]
    return ExtendedGValuation(cc, tuple(y))


def omega_min(mu: ExtendedPoint, m: Sequence[int], layout: LatticeLayout):
    """min over ω of mu(prod f_iω(i)^a_i prod g_k^b_k), skipping monomials outside the dual cone."""
    if len(m) != layout.small_dim:
        raise DimensionMismatch("character does not live in the dual of 𝒩")
    values = []
    gens = mu.cone.generators
    for w in omega(layout):
        e = [0] * layout.big_dim
        for ai, j in zip(m[: layout.r], w):
            e[j] += ai
        for k in range(layout.m):
            e[layout.w_index(k)] = m[layout.r + k]
        if any(dot(e, g) < 0 for g in gens):
            continue
        values.append(evaluate(mu, e))
    return ext_min(values)


def omega_deviations(mu: ExtendedPoint, fan: ToricFan, monomials: Iterable[Sequence[int]]) -> list[tuple]:
    """Monomials of the orbit's dual where psi_bar(mu) and the Ω-minimum disagree.

    Returns (m, psi_bar value, Ω value) triples; monomials outside the dual
    cone of the orbit are skipped. Disagreement needs negative exponents.
    """
    g = psi_bar(mu, fan)
    gens = g.cone.sigma.generators
    out = []
    for m in monomials:
        if any(dot(m, x) < 0 for x in gens):
            continue
        a, b = g(m), omega_min(mu, m, fan.layout)
        if a != b:
            out.append((tuple(m), a, b))
    return out


def psi_bar_piece(cells: Sequence[Polyhedron], cone: Cone, fan: ToricFan) -> tuple[ColoredCone, PolyhedralComplex]:
    """Set-wise psi-bar of lifted cells of the orbit of ``cone`` (cells already contain span(cone))."""
    layout = fan.layout
    cc, a = fan.origin(cone)
    images = _psi_cells(cells, layout, excluded=a)
    _, proj = quotient_map(cc.sigma)
    return cc, PolyhedralComplex(proj.codomain, [linear_image(proj, p) for p in images])


@dataclass
class SphericalTrop:
    """Pieces of trop_G, one per colored cone, each in 𝒩_Q/span(σ) (free coordinates)."""

    dim: int
    pieces: dict[ColoredCone, PolyhedralComplex] = field(default_factory=dict)

    def add(self, cc: ColoredCone, cells: Iterable[Polyhedron]):
        old = self.pieces.get(cc)
        cells = list(cells)
        if old is not None:
            cells += list(old.cells)
        qdim = self.dim - len(cc.sigma.span())
        self.pieces[cc] = PolyhedralComplex(qdim, cells)

    def nonempty(self) -> dict[ColoredCone, PolyhedralComplex]:
        return {cc: p for cc, p in sorted(self.pieces.items(), key=lambda kv: kv[0].key()) if not p.is_empty()}

    def same_as(self, other: "SphericalTrop") -> dict[ColoredCone, bool]:
        keys = set(self.nonempty()) | set(other.nonempty())
        out = {}
        for cc in sorted(keys, key=ColoredCone.key):
            qdim = self.dim - len(cc.sigma.span())
            a = self.pieces.get(cc, PolyhedralComplex(qdim))
            b = other.pieces.get(cc, PolyhedralComplex(qdim))
            out[cc] = same_support(a, b)
        return out


def _closure_global(d: SpaceDescriptor, fan: ColoredFan, gens, exact_one: bool = False) -> SphericalTrop:
    tfan = build_fan_Z(fan, d.layout, exact_one=exact_one)
    trop = _gen_prevariety(d, gens)
    ext_c = extended_closure(trop, tfan)
    result = SphericalTrop(d.layout.small_dim)
    items = [(cone, ext_c.lifted_piece(cone)) for cone in ext_c.nonempty()]
    for cc, piece in pmap(lambda it: psi_bar_piece(it[1], it[0], tfan), items):
        result.add(cc, piece.cells)
    return result


def trop_closure(
    d: SpaceDescriptor, fan: ColoredFan, gens: Sequence[TropicalPolynomial] = (), mode: str = "auto",
    exact_one: bool = False,
) -> SphericalTrop:
    """psi-bar of the extended closure of trop_T(Y) over Σ_Z, grouped by colored cone.

    ``mode`` is "global" (one Σ_Z, needs a polyhedral fan), "per-cone" (each
    maximal colored cone as a simple embedding, glued along common faces) or
    "auto" (global when polyhedral).
    """
    _check_layout(d, gens)
    if mode not in {"auto", "global", "per-cone"}:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "auto":
        mode = "global" if is_polyhedral(fan) else "per-cone"
    if mode == "global":
        return _closure_global(d, fan, gens, exact_one)
    result = SphericalTrop(d.layout.small_dim)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PrevarietyOnlyWarning)
        parts = [
            _closure_global(d, ColoredFan(fan.palette, fan.valuation_cone, (cc,)), gens, exact_one)
            for cc in fan.maximal_cones()
        ]
    if len(set(d.generators) | set(gens)) > 1:
        warnings.warn("closure computed from a tropical prevariety", PrevarietyOnlyWarning, stacklevel=2)
    for part in parts:
        for cc, piece in part.pieces.items():
            result.add(cc, piece.cells)
    return result


def closure_in_spherical(t: PolyhedralComplex, fan: ColoredFan) -> SphericalTrop:
    """Closure of a subset of 𝒱 inside the orbit decomposition of the embedding."""
    result = SphericalTrop(fan.dim)
    recs = [cell.recession_cone() for cell in t.cells]
    for cc in fan.all_cones():
        _, proj = quotient_map(cc.sigma)
        cells = [linear_image(proj, cell) for cell, rec in zip(t.cells, recs) if relint_meets(cc.sigma, rec)]
        result.add(cc, cells)
    return result


@dataclass
class ClosureReport:
    equal: bool
    per_orbit: dict[ColoredCone, bool]
    lhs: SphericalTrop
    rhs: SphericalTrop


def check_closure_commutes(
    d: SpaceDescriptor, fan: ColoredFan, gens: Sequence[TropicalPolynomial] = (), mode: str = "auto"
) -> ClosureReport:
    """Compare psi-bar(trop_T(closure)) with the closure of trop_G(Y), orbit by orbit."""
    lhs = trop_closure(d, fan, gens, mode)
    rhs = closure_in_spherical(trop_subvariety(d, gens), fan)
    per = lhs.same_as(rhs)
    return ClosureReport(all(per.values()), per, lhs, rhs)


def push_tropicalization(
    maps: Mapping[ColoredCone, tuple[ColoredCone, LinearMap]], t: SphericalTrop, target_dim: int | None = None
) -> SphericalTrop:
    """Apply a linear map on each orbit piece and collect the images on the target orbits."""
    out = SphericalTrop(t.dim if target_dim is None else target_dim)
    for cc, piece in t.nonempty().items():
        if cc not in maps:
            raise DomainError(f"no map given for the orbit of {cc!r}")
        target, L = maps[cc]
        out.add(target, [linear_image(L, cell) for cell in piece.cells])
    return out
