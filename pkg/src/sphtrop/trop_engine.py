"""Tropical hypersurfaces, prevarieties and their closures in toric partial compactifications.

Min-plus convention: the tropical polynomial with terms (e, c) is the
function w -> min_e (c + <e, w>), and its hypersurface is the locus where
the minimum is attained at least twice.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from ._parallel import pmap
from .errors import DimensionMismatch, DomainError
from .qpoly import (
    INF,
    Cone,
    LinearMap,
    PolyhedralComplex,
    Polyhedron,
    Subspace,
    as_fraction,
    common_refinement,
    dot,
    linear_image,
)

TropicalComplex = PolyhedralComplex


class PrevarietyOnlyWarning(UserWarning):
    """The result is a tropical prevariety; it equals the tropical variety only for a principal ideal."""


@dataclass(frozen=True)
class TropicalPolynomial:
    nvars: int
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        merged: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms:
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars:
                raise DimensionMismatch(f"exponent {e} has {len(e)} entries, expected {self.nvars}")
            c = as_fraction(c)
            merged[e] = min(c, merged.get(e, c))
        if not merged:
            raise DomainError("a tropical polynomial needs at least one term")
        object.__setattr__(self, "terms", tuple(sorted(merged.items())))
        object.__setattr__(self, "names", tuple(self.names))

    @classmethod
    def from_exponents(cls, exponents: Iterable[Sequence[int]], valuations: Iterable | None = None, names=()):
        exponents = [tuple(e) for e in exponents]
        if not exponents:
            raise DomainError("a tropical polynomial needs at least one term")
        vals = list(valuations) if valuations is not None else [0] * len(exponents)
        return cls(len(exponents[0]), tuple(zip(exponents, vals)), tuple(names))

    def __call__(self, w: Sequence) -> Fraction:
        return min(c + dot(e, w) for e, c in self.terms)

    def minimizers(self, w: Sequence) -> list[tuple[int, ...]]:
        vals = [(c + dot(e, w), e) for e, c in self.terms]
        best = min(v for v, _ in vals)
        return [e for v, e in vals if v == best]


def hypersurface(f: TropicalPolynomial) -> TropicalComplex:
    """Cells {w : term p and term q tie and are minimal}, one per pair of terms."""
    n = f.nvars
    terms = f.terms
    cells = []
    for (ep, cp), (eq, cq) in combinations(terms, 2):
        eqn = (tuple(a - b for a, b in zip(ep, eq)), cq - cp)
        ineqs = [(tuple(a - b for a, b in zip(el, ep)), cp - cl) for el, cl in terms if el not in (ep, eq)]
        cell = Polyhedron.from_inequalities(n, ineqs, [eqn])
        if not cell.is_empty():
            cells.append(cell)
    return PolyhedralComplex(n, cells)


def prevariety(fs: Sequence[TropicalPolynomial], nvars: int | None = None) -> TropicalComplex:
    """Common refinement of the hypersurfaces; the empty list gives the whole space."""
    fs = list(fs)
    if not fs:
        if nvars is None:
            raise DimensionMismatch("ambient dimension needed for an empty generator list")
        return PolyhedralComplex.full(nvars)
    n = fs[0].nvars
    if any(f.nvars != n for f in fs) or (nvars is not None and nvars != n):
        raise DimensionMismatch("generators use different variable layouts")
    if len(set(fs)) > 1:
        warnings.warn(
            "intersection of several hypersurfaces: this is a tropical prevariety", PrevarietyOnlyWarning, stacklevel=2
        )
    return common_refinement(pmap(hypersurface, sorted(set(fs), key=lambda f: f.terms)))


# -- extended points -----------------------------------------------------


def quotient_map(cone: Cone) -> tuple[Subspace, LinearMap]:
    """The span of ``cone`` and the projection onto N/span in free coordinates."""
    span = cone.span()
    rows = span.quotient_matrix()
    return span, LinearMap(tuple(tuple(r) for r in rows), cone.dim, len(rows))


@dataclass(frozen=True)
class ExtendedPoint:
    """A point of the orbit of ``cone``: a vector of N_Q modulo span(cone)."""

    cone: Cone
    representative: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.representative) != self.cone.dim:
            raise DimensionMismatch("representative does not live in the cone's space")
        red = self.cone.span().reduce(tuple(as_fraction(x) for x in self.representative))
        object.__setattr__(self, "representative", tuple(Fraction(x) for x in red))

    @classmethod
    def from_quotient(cls, cone: Cone, coords: Sequence) -> "ExtendedPoint":
        return cls(cone, cone.span().lift(coords))

    def quotient_coordinates(self) -> tuple[Fraction, ...]:
        span = self.cone.span()
        return tuple(self.representative[f] for f in span.free)


def evaluate(mu: ExtendedPoint, m: Sequence[int]):
    """mu(m) for a character m of the dual cone: finite on the orthogonal face, INF elsewhere."""
    if len(m) != mu.cone.dim:
        raise DimensionMismatch("character does not match the point's space")
    gens = mu.cone.generators
    if any(dot(m, g) < 0 for g in gens):
        raise DomainError(f"{tuple(m)} is not in the dual of {mu.cone!r}")
    if all(dot(m, g) == 0 for g in gens):
        return Fraction(dot(mu.representative, m))
    return INF


@dataclass
class ExtendedComplex:
    """Pieces indexed by cones of a fan; each piece lives in N_Q/span(cone), in free coordinates."""

    dim: int
    pieces: dict[Cone, PolyhedralComplex] = field(default_factory=dict)

    def piece(self, cone: Cone) -> PolyhedralComplex:
        return self.pieces.get(cone, PolyhedralComplex(cone.dim - len(cone.span())))

    def nonempty(self) -> dict[Cone, PolyhedralComplex]:
        return {c: p for c, p in self.pieces.items() if not p.is_empty()}

    def lifted_piece(self, cone: Cone) -> list[Polyhedron]:
        """Preimages of the cells of a piece in N_Q (lineality span(cone) added)."""
        span = cone.span()
        lines = list(cone.rays) + list(cone.lineality)
        out = []
        for cell in self.piece(cone).cells:
            out.append(
                Polyhedron.from_generators(
                    self.dim,
                    [span.lift(v) for v in cell.vertices],
                    [span.lift(r) for r in cell.rays],
                    [span.lift(l) for l in cell.lines] + lines,
                )
            )
        return out


def _meets_relint(sigma: Cone, rec: Cone) -> bool:
    return sigma.relint_contains(sigma.intersection(rec).relint_point())


def extended_closure(c: TropicalComplex, fan) -> ExtendedComplex:
    """Closure of the support of ``c`` in the partial compactification given by ``fan``.

    ``fan`` is anything with a ``cones()`` method (e.g. a ToricFan). A cell P
    reaches the orbit of a cone sigma when its recession cone meets relint(sigma);
    it contributes the projection of P to N/span(sigma).
    """
    cones = fan.cones()
    if any(s.dim != c.dim for s in cones):
        raise DimensionMismatch("complex and fan live in different spaces")
    recs = [cell.recession_cone() for cell in c.cells]

    def piece(sigma: Cone) -> PolyhedralComplex:
        _, proj = quotient_map(sigma)
        return PolyhedralComplex(
            proj.codomain, [linear_image(proj, cell) for cell, rec in zip(c.cells, recs) if _meets_relint(sigma, rec)]
        )

    return ExtendedComplex(c.dim, dict(zip(cones, pmap(piece, cones))))
