"""Finite unions of polyhedra, compared by support."""

from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

from .._parallel import pmap
from ..errors import DimensionMismatch
from .polyhedron import Polyhedron


def _maximal(cells: Iterable[Polyhedron]) -> list[Polyhedron]:
    uniq = sorted({c for c in cells if not c.is_empty()}, key=lambda c: (-c.dimension, c.key()))
    kept: list[Polyhedron] = []
    for c in uniq:
        if not any(k.contains_polyhedron(c) for k in kept):
            kept.append(c)
    return sorted(kept, key=Polyhedron.key)


class PolyhedralComplex:
    """A set of maximal cells; the object of interest is the union of the cells.

    Cells contained in other cells are discarded and the rest sorted, so two
    complexes built from the same cells compare equal. Use ``same_support`` to
    compare unions that were subdivided differently.
    """

    __slots__ = ("dim", "cells")

    def __init__(self, dim: int, cells: Iterable[Polyhedron] = ()):
        cells = list(cells)
        for c in cells:
            if c.dim != dim:
                raise DimensionMismatch(f"cell in dimension {c.dim} added to a complex in dimension {dim}")
        self.dim = dim
        self.cells = tuple(_maximal(cells))

    @classmethod
    def full(cls, dim: int) -> "PolyhedralComplex":
        return cls(dim, [Polyhedron.full(dim)])

    def is_empty(self) -> bool:
        return not self.cells

    def __eq__(self, other):
        if not isinstance(other, PolyhedralComplex):
            return NotImplemented
        return self.dim == other.dim and self.cells == other.cells

    def __hash__(self):
        return hash((self.dim, self.cells))

    def __repr__(self):
        return f"PolyhedralComplex(dim={self.dim}, cells={list(self.cells)})"

    def __iter__(self):
        return iter(self.cells)

    def __len__(self):
        return len(self.cells)

    @property
    def dimension(self) -> int:
        return max((c.dimension for c in self.cells), default=-1)

    def contains(self, x: Sequence) -> bool:
        return any(c.contains(x) for c in self.cells)

    def hyperplanes(self):
        return {h for c in self.cells for h in c.hyperplanes()}

    def covers(self, p: Polyhedron) -> bool:
        return covers(p, self.cells)

    def same_support(self, other: "PolyhedralComplex") -> bool:
        return same_support(self, other)

    def intersect_polyhedron(self, p: Polyhedron) -> "PolyhedralComplex":
        return PolyhedralComplex(self.dim, [c.intersection(p) for c in self.cells])


def subdivide(p: Polyhedron, hyperplanes: Iterable[tuple[Sequence, object]]) -> list[Polyhedron]:
    """Split ``p`` by affine hyperplanes; returns the pieces of dimension dim(p).

    Hyperplanes not meeting the relative interior of a piece leave it alone.
    """
    if p.is_empty():
        return []
    pieces = [p]
    for a, b in hyperplanes:
        nxt = []
        for q in pieces:
            if {1, -1} <= q.side_signs(a, b):
                for sense in (1, -1):
                    half = q.cut(a, b, sense)
                    if half.dimension == q.dimension:
                        nxt.append(half)
            else:
                nxt.append(q)
        pieces = nxt
    return pieces


def covers(p: Polyhedron, cells: Sequence[Polyhedron]) -> bool:
    """Exact test of p being contained in the union of ``cells``.

    After subdividing p by every hyperplane of every cell, membership in a
    cell is constant on the relative interior of each piece.
    """
    if p.is_empty():
        return True
    cells = [c for c in cells if not c.is_empty()]
    if any(c.contains_polyhedron(p) for c in cells):
        return True
    cells = [c for c in cells if not c.intersection(p).is_empty()]
    if not cells:
        return False
    hyperplanes = sorted({h for c in cells for h in c.hyperplanes()})
    for piece in subdivide(p, hyperplanes):
        x = piece.relint_point()
        if not any(c.contains(x) for c in cells):
            return False
    return True


def _as_cells(obj) -> list[Polyhedron]:
    if isinstance(obj, PolyhedralComplex):
        return list(obj.cells)
    if isinstance(obj, Polyhedron):
        return [obj]
    return list(obj)


def same_support(a, b) -> bool:
    """Equality of the unions of two families of polyhedra."""
    ca, cb = _as_cells(a), _as_cells(b)
    return all(covers(p, cb) for p in ca) and all(covers(q, ca) for q in cb)


def support_contains(big, small) -> bool:
    cb = _as_cells(big)
    return all(covers(p, cb) for p in _as_cells(small))


def common_refinement(complexes: Sequence[PolyhedralComplex]) -> PolyhedralComplex:
    """Cells P_1 ∩ ... ∩ P_k with P_i from the i-th complex, maximal ones kept."""
    complexes = list(complexes)
    if not complexes:
        raise ValueError("common_refinement needs at least one complex")
    dim = complexes[0].dim
    for c in complexes:
        if c.dim != dim:
            raise DimensionMismatch("complexes live in different spaces")
    acc = list(complexes[0].cells)
    for c in complexes[1:]:
        pairs = list(product(acc, c.cells))
        acc = [x for x in pmap(lambda pq: pq[0].intersection(pq[1]), pairs) if not x.is_empty()]
        acc = list(PolyhedralComplex(dim, acc).cells)
    return PolyhedralComplex(dim, acc)
