"""Rational polyhedra, stored as their homogenization cone.

A polyhedron P in Q^d is kept as the closed cone
    hom(P) = closure of {(t, t*x) : t >= 0, x in P}
in Q^(1+d), with t as coordinate 0. Points of P are the rays with t > 0,
recession directions are rays with t = 0. P is empty exactly when no
generator has t > 0; all empty polyhedra share one canonical value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import DimensionMismatch, DomainError
from .cone import Cone
from .linalg import as_fraction, dot, primitive, qvec


def _hom_constraint(a, b):
    # a.x >= b  <=>  -b*t + a.x >= 0
    return primitive((-as_fraction(b),) + qvec(a))


class Polyhedron:
    __slots__ = ("dim", "hom", "_empty")

    def __init__(self, dim: int, hom: Cone):
        self.dim = dim
        self._empty = all(r[0] == 0 for r in hom.rays)
        self.hom = Cone.zero(dim + 1) if self._empty else hom

    @classmethod
    def from_inequalities(
        cls, dim: int, ineqs: Iterable[tuple[Sequence, object]] = (), eqs: Iterable[tuple[Sequence, object]] = ()
    ) -> "Polyhedron":
        """{x : <a,x> >= b for (a,b) in ineqs, <e,x> = c for (e,c) in eqs}."""
        hi, he = [], []
        for a, b in ineqs:
            if len(a) != dim:
                raise DimensionMismatch(f"inequality {tuple(a)} is not in dimension {dim}")
            hi.append(_hom_constraint(a, b))
        for e, c in eqs:
            if len(e) != dim:
                raise DimensionMismatch(f"equation {tuple(e)} is not in dimension {dim}")
            he.append(_hom_constraint(e, c))
        hi.append((1,) + (0,) * dim)
        return cls(dim, Cone.from_inequalities(dim + 1, hi, he))

    @classmethod
    def from_generators(
        cls, dim: int, points: Iterable[Sequence] = (), rays: Iterable[Sequence] = (), lines: Iterable[Sequence] = ()
    ) -> "Polyhedron":
        points = [qvec(p) for p in points]
        if not points:
            return cls.empty(dim)
        gens = [(Fraction(1),) + p for p in points] + [(0,) + tuple(r) for r in rays]
        lin = [(0,) + tuple(l) for l in lines]
        return cls(dim, Cone.from_generators(dim + 1, gens, lin))

    @classmethod
    def from_cone(cls, c: Cone) -> "Polyhedron":
        return cls.from_generators(c.dim, [(0,) * c.dim], c.rays, c.lineality)

    @classmethod
    def point(cls, p: Sequence) -> "Polyhedron":
        return cls.from_generators(len(p), [p])

    @classmethod
    def empty(cls, dim: int) -> "Polyhedron":
        return cls(dim, Cone.zero(dim + 1))

    @classmethod
    def full(cls, dim: int) -> "Polyhedron":
        return cls.from_inequalities(dim)

    # -- queries -----------------------------------------------------
    def is_empty(self) -> bool:
        return self._empty

    def __eq__(self, other):
        if not isinstance(other, Polyhedron):
            return NotImplemented
        return self.dim == other.dim and self.hom == other.hom

    def __hash__(self):
        return hash((self.dim, self.hom))

    def key(self):
        return (self.dim, self.hom.key())

    def __repr__(self):
        if self._empty:
            return f"Polyhedron(dim={self.dim}, empty)"
        parts = [f"points={[tuple(str(x) for x in p) for p in self.vertices]}"]
        if self.rays:
            parts.append(f"rays={list(self.rays)}")
        if self.lines:
            parts.append(f"lines={list(self.lines)}")
        return f"Polyhedron(dim={self.dim}, {', '.join(parts)})"

    @property
    def vertices(self) -> list[tuple[Fraction, ...]]:
        """Minimal points: one per ray of hom(P) with t > 0 (vertices if P is pointed)."""
        return [tuple(Fraction(x, r[0]) for x in r[1:]) for r in self.hom.rays if r[0] > 0]

    @property
    def rays(self) -> list[tuple[int, ...]]:
        return [r[1:] for r in self.hom.rays if r[0] == 0]

    @property
    def lines(self) -> list[tuple[int, ...]]:
        return [l[1:] for l in self.hom.lineality]

    @property
    def dimension(self) -> int:
        return -1 if self._empty else self.hom.dimension - 1

    def is_bounded(self) -> bool:
        return not self.rays and not self.lines

    def inequalities(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Facet inequalities as (a, b) meaning <a,x> >= b; the face at infinity is dropped."""
        if self._empty:
            return [((0,) * self.dim, Fraction(1))]
        out = []
        finite = [r for r in self.hom.rays if r[0] > 0]
        for u in self.hom.facets:
            if any(dot(u, r) == 0 for r in finite):
                out.append((u[1:], Fraction(-u[0])))
        return out

    def equations(self) -> list[tuple[tuple[int, ...], Fraction]]:
        if self._empty:
            return []
        return [(e[1:], Fraction(-e[0])) for e in self.hom.equations]

    def hyperplanes(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Every affine hyperplane appearing in the H-representation."""
        return self.inequalities() + self.equations()

    def _check(self, x):
        if len(x) != self.dim:
            raise DimensionMismatch(f"point of dimension {len(x)} vs polyhedron of dimension {self.dim}")

    def contains(self, x: Sequence) -> bool:
        self._check(x)
        return not self._empty and self.hom.contains((1,) + qvec(x))

    def relint_contains(self, x: Sequence) -> bool:
        self._check(x)
        return not self._empty and self.hom.relint_contains((1,) + qvec(x))

    def relint_point(self) -> tuple[Fraction, ...]:
        if self._empty:
            raise DomainError("the empty polyhedron has no points")
        s = self.hom.relint_point()
        return tuple(Fraction(x, s[0]) for x in s[1:])

    def contains_polyhedron(self, other: "Polyhedron") -> bool:
        if other.dim != self.dim:
            raise DimensionMismatch("polyhedra live in different spaces")
        if other._empty:
            return True
        if self._empty:
            return False
        return self.hom.contains_cone(other.hom)

    def __le__(self, other: "Polyhedron") -> bool:
        return other.contains_polyhedron(self)

    def intersection(self, other: "Polyhedron") -> "Polyhedron":
        if other.dim != self.dim:
            raise DimensionMismatch("polyhedra live in different spaces")
        if self._empty or other._empty:
            return Polyhedron.empty(self.dim)
        a, b = self.hom, other.hom
        return Polyhedron(
            self.dim,
            Cone.from_inequalities(
                self.dim + 1, list(a.facets) + list(b.facets), list(a.equations) + list(b.equations)
            ),
        )

    def cut(self, a: Sequence, b, sense: int) -> "Polyhedron":
        """Intersect with <a,x> >= b (sense=1), <= b (sense=-1) or = b (sense=0)."""
        if sense == 0:
            h = Polyhedron.from_inequalities(self.dim, (), [(a, b)])
        elif sense > 0:
            h = Polyhedron.from_inequalities(self.dim, [(a, b)])
        else:
            h = Polyhedron.from_inequalities(self.dim, [(tuple(-x for x in a), -as_fraction(b))])
        return self.intersection(h)

    def side_signs(self, a: Sequence, b) -> set[int]:
        """Signs taken by <a,x> - b on P, read off the generators (0 included if attained)."""
        b = as_fraction(b)
        signs = set()
        for v in self.vertices:
            d = dot(a, v) - b
            signs.add((d > 0) - (d < 0))
        for r in self.rays:
            d = dot(a, r)
            if d:
                signs.add(1 if d > 0 else -1)
        for l in self.lines:
            if dot(a, l):
                signs |= {1, -1}
        if {1, -1} <= signs:
            signs.add(0)
        return signs

    def recession_cone(self) -> Cone:
        if self._empty:
            raise DomainError("recession cone of the empty polyhedron")
        return Cone.from_generators(self.dim, self.rays, self.lines)

    def as_cone(self) -> Cone:
        """The cone itself, for polyhedra that are cones (contain 0 as a vertex-like point)."""
        rec = self.recession_cone()
        if Polyhedron.from_cone(rec) != self:
            raise DomainError("polyhedron is not a cone")
        return rec


def recession_cone(p: Polyhedron) -> Cone:
    return p.recession_cone()
