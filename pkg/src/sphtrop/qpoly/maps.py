"""Linear maps between rational vector spaces and their action on cones and polyhedra."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import DimensionMismatch
from .cone import Cone
from .linalg import as_fraction, dot, rank
from .polyhedron import Polyhedron


@dataclass(frozen=True)
class LinearMap:
    """Matrix with ``codomain`` rows and ``domain`` columns, acting on column vectors."""

    matrix: tuple[tuple[Fraction, ...], ...]
    domain: int
    codomain: int

    def __post_init__(self):
        m = tuple(tuple(as_fraction(x) for x in row) for row in self.matrix)
        if len(m) != self.codomain or any(len(row) != self.domain for row in m):
            raise DimensionMismatch(f"matrix shape does not match {self.domain} -> {self.codomain}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], domain: int | None = None) -> "LinearMap":
        rows = [list(r) for r in rows]
        if domain is None:
            if not rows:
                raise DimensionMismatch("cannot infer the domain of an empty matrix")
            domain = len(rows[0])
        return cls(tuple(tuple(r) for r in rows), domain, len(rows))

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n, n)

    def __call__(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.domain:
            raise DimensionMismatch(f"vector of dimension {len(v)} vs map domain {self.domain}")
        return tuple(dot(row, v) for row in self.matrix)

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        """Composition: (self @ other)(v) = self(other(v))."""
        if other.codomain != self.domain:
            raise DimensionMismatch("maps cannot be composed")
        cols = list(zip(*other.matrix)) if other.matrix else [()] * other.domain
        return LinearMap(
            tuple(tuple(dot(row, col) for col in cols) for row in self.matrix), other.domain, self.codomain
        )

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [tuple(row[j] for row in self.matrix) for j in range(self.domain)]

    def transpose(self) -> "LinearMap":
        return LinearMap(tuple(self.columns()), self.codomain, self.domain)

    def rank(self) -> int:
        return rank(self.matrix, self.domain) if self.matrix else 0

    def pullback_constraint(self, a: Sequence) -> tuple[Fraction, ...]:
        """The functional a o self on the domain."""
        return tuple(dot(a, col) for col in self.columns())


def linear_image(m: LinearMap, obj):
    """Image of a cone, polyhedron or polyhedral complex under ``m``."""
    from .complex import PolyhedralComplex

    if isinstance(obj, Cone):
        if obj.dim != m.domain:
            raise DimensionMismatch("cone does not live in the map's domain")
        return Cone.from_generators(m.codomain, [m(r) for r in obj.rays], [m(l) for l in obj.lineality])
    if isinstance(obj, Polyhedron):
        if obj.dim != m.domain:
            raise DimensionMismatch("polyhedron does not live in the map's domain")
        if obj.is_empty():
            return Polyhedron.empty(m.codomain)
        return Polyhedron.from_generators(
            m.codomain, [m(p) for p in obj.vertices], [m(r) for r in obj.rays], [m(l) for l in obj.lines]
        )
    if isinstance(obj, PolyhedralComplex):
        if obj.dim != m.domain:
            raise DimensionMismatch("complex does not live in the map's domain")
        return PolyhedralComplex(m.codomain, [linear_image(m, c) for c in obj.cells])
    raise TypeError(f"cannot take the linear image of {type(obj).__name__}")


def preimage(m: LinearMap, obj):
    """Preimage of a cone or polyhedron under ``m`` (pull back its H-representation)."""
    if isinstance(obj, Cone):
        if obj.dim != m.codomain:
            raise DimensionMismatch("cone does not live in the map's codomain")
        return Cone.from_inequalities(
            m.domain, [m.pullback_constraint(u) for u in obj.facets], [m.pullback_constraint(e) for e in obj.equations]
        )
    if isinstance(obj, Polyhedron):
        if obj.dim != m.codomain:
            raise DimensionMismatch("polyhedron does not live in the map's codomain")
        if obj.is_empty():
            return Polyhedron.empty(m.domain)
        return Polyhedron.from_inequalities(
            m.domain,
            [(m.pullback_constraint(a), b) for a, b in obj.inequalities()],
            [(m.pullback_constraint(e), c) for e, c in obj.equations()],
        )
    raise TypeError(f"cannot take the preimage of {type(obj).__name__}")
