"""Rational polyhedral cones with both generator and inequality descriptions."""

from __future__ import annotations

from itertools import chain
from typing import Iterable, Sequence

from ..errors import DimensionMismatch
from .linalg import Subspace, dot, is_zero, nullspace, primitive, rank, rref


def _check_dim(vectors, dim, what):
    for v in vectors:
        if len(v) != dim:
            raise DimensionMismatch(f"{what} {tuple(v)} does not have dimension {dim}")


def double_description(
    ineqs: Sequence[Sequence[int]], eqs: Sequence[Sequence[int]], dim: int
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Generators of {x : <a,x> >= 0 for a in ineqs, <e,x> = 0 for e in eqs}.

    Returns ``(rays, lineality)``. The rays are the extreme rays of the cone
    modulo its lineality space, each given by one (non-canonical) integer
    representative. Constraints are added one at a time; two rays are
    combined only when they are adjacent, which is decided by the rank of
    their common tight constraints.
    """
    lin = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    rays: list[tuple[int, ...]] = []
    done: list[tuple[int, ...]] = []
    # per ray: frozenset of indices into ``done`` that are tight
    tight: list[frozenset] = []

    constraints = [(tuple(a), False) for a in eqs] + [(tuple(a), True) for a in ineqs]
    for a, is_ineq in constraints:
        if is_zero(a):
            continue
        k = len(done)
        pivot = next((i for i, l in enumerate(lin) if dot(a, l) != 0), None)
        if pivot is not None:
            l0 = lin.pop(pivot)
            d0 = dot(a, l0)
            if d0 < 0:
                l0 = tuple(-x for x in l0)
                d0 = -d0
            lin = [primitive([d0 * x - dot(a, l) * y for x, y in zip(l, l0)]) for l in lin]
            rays = [primitive([d0 * x - dot(a, r) * y for x, y in zip(r, l0)]) for r in rays]
            tight = [t | {k} for t in tight]
            if is_ineq:
                rays.append(l0)
                # l0 is tight on every earlier constraint (it was in the lineality)
                tight.append(frozenset(range(k)))
            done.append(a)
            continue

        done.append(a)
        vals = [dot(a, r) for r in rays]
        new_rays, new_tight = [], []
        pos, neg = [], []
        for r, t, v in zip(rays, tight, vals):
            if v == 0:
                new_rays.append(r)
                new_tight.append(t | {k})
            elif v > 0:
                pos.append((r, t, v))
                if is_ineq:
                    new_rays.append(r)
                    new_tight.append(t)
            else:
                neg.append((r, t, v))
        if pos and neg:
            full_rank = rank(done, dim)
            for rp, tp, vp in pos:
                for rn, tn, vn in neg:
                    common = tp & tn
                    if len(common) < full_rank - 2:
                        continue
                    if rank([done[i] for i in common], dim) != full_rank - 2:
                        continue
                    new_rays.append(primitive([vp * x - vn * y for x, y in zip(rn, rp)]))
                    new_tight.append(common | {k})
        rays, tight = new_rays, new_tight
    return rays, lin


def _canonical_rays(rays, lineality: Subspace, dim) -> tuple[tuple[int, ...], ...]:
    out = set()
    for r in rays:
        v = primitive(lineality.reduce(r))
        if not is_zero(v):
            out.add(v)
    return tuple(sorted(out))


class Cone:
    """A closed convex rational cone {x : <u,x> >= 0 for facets u, <e,x> = 0}.

    Both descriptions are kept in canonical form: lineality and equation
    bases in reduced echelon form (primitive integer rows), extreme rays
    and facet normals reduced modulo those spaces, primitive, sorted.
    Equality of cones is therefore equality of representations.
    """

    __slots__ = ("dim", "rays", "lineality", "facets", "equations", "_hash")

    def __init__(self, dim, rays, lineality, facets, equations):
        self.dim = dim
        self.rays = rays
        self.lineality = lineality
        self.facets = facets
        self.equations = equations
        self._hash = hash((dim, rays, lineality))

    # -- construction -------------------------------------------------
    @classmethod
    def from_generators(cls, dim: int, rays: Iterable[Sequence] = (), lineality: Iterable[Sequence] = ()) -> "Cone":
        rays = [primitive(r) for r in rays]
        lines = [primitive(l) for l in lineality]
        _check_dim(chain(rays, lines), dim, "generator")
        rays = [r for r in rays if not is_zero(r)]
        lines = [l for l in lines if not is_zero(l)]
        if not lines:
            simplicial = cls._simplicial(dim, sorted(set(rays)))
            if simplicial is not None:
                return simplicial
        # the dual cone's generators are our facet normals and equations
        drays, dlin = double_description(rays, lines, dim)
        return cls._from_both(dim, rays, lines, drays, dlin)

    @classmethod
    def _simplicial(cls, dim, rays):
        """Shortcut for linearly independent rays: facet i is dual to ray i."""
        _, pivots = rref(rays, dim)
        if len(pivots) != len(rays):
            return None
        k = len(rays)
        inv, _ = rref([[r[p] for p in pivots] + [int(i == j) for j in range(k)] for i, r in enumerate(rays)], 2 * k)
        eq_space = Subspace(nullspace(rays, dim), dim)
        normals = []
        for i in range(k):
            n = [0] * dim
            for row, p in zip(inv, pivots):
                n[p] = row[k + i]
            normals.append(n)
        facets = _canonical_rays(normals, eq_space, dim)
        return cls(dim, tuple(rays), (), facets, eq_space.canonical_basis())

    @classmethod
    def from_inequalities(cls, dim: int, ineqs: Iterable[Sequence] = (), eqs: Iterable[Sequence] = ()) -> "Cone":
        ineqs = [primitive(a) for a in ineqs]
        eqs = [primitive(e) for e in eqs]
        _check_dim(chain(ineqs, eqs), dim, "constraint")
        rays, lin = double_description(ineqs, eqs, dim)
        facets, eq_basis = _hrep_from_generators(dim, rays, lin, ineqs)
        return cls._assemble(dim, rays, lin, facets, eq_basis)

    @classmethod
    def _from_both(cls, dim, gen_rays, gen_lines, facet_cands, eqs):
        eq_space = Subspace(eqs, dim)
        facets = _canonical_rays(facet_cands, eq_space, dim)
        lin_space = Subspace(nullspace(list(facets) + list(eqs), dim), dim)
        lin = lin_space.canonical_basis()
        pointed_dim = dim - len(lin) - len(eq_space)
        extreme = []
        for r in gen_rays:
            v = primitive(lin_space.reduce(r))
            if is_zero(v):
                continue
            tight = [u for u in facets if dot(u, v) == 0]
            if _rank0(tight, dim) == pointed_dim - 1:
                extreme.append(v)
        rays = tuple(sorted(set(extreme)))
        return cls(dim, rays, lin, facets, eq_space.canonical_basis())

    @classmethod
    def _assemble(cls, dim, rays, lin, facet_cands, eqs):
        lin_space = Subspace(lin, dim)
        eq_space = Subspace(eqs, dim)
        return cls(
            dim,
            _canonical_rays(rays, lin_space, dim),
            lin_space.canonical_basis(),
            _canonical_rays(facet_cands, eq_space, dim),
            eq_space.canonical_basis(),
        )

    @classmethod
    def zero(cls, dim: int) -> "Cone":
        return cls.from_generators(dim)

    @classmethod
    def full(cls, dim: int) -> "Cone":
        return cls.from_inequalities(dim)

    @classmethod
    def orthant(cls, dim: int) -> "Cone":
        return cls.from_generators(dim, [tuple(int(i == j) for j in range(dim)) for i in range(dim)])

    # -- basic queries -----------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return self.dim == other.dim and self.rays == other.rays and self.lineality == other.lineality

    def __hash__(self):
        return self._hash

    def __repr__(self):
        parts = [f"rays={list(self.rays)}"]
        if self.lineality:
            parts.append(f"lineality={list(self.lineality)}")
        return f"Cone(dim={self.dim}, {', '.join(parts)})"

    def key(self):
        return (self.dim, self.rays, self.lineality)

    @property
    def generators(self) -> list[tuple[int, ...]]:
        """Rays plus both orientations of each lineality vector."""
        return list(self.rays) + list(self.lineality) + [tuple(-x for x in l) for l in self.lineality]

    @property
    def dimension(self) -> int:
        return self.dim - len(self.equations)

    def is_pointed(self) -> bool:
        return not self.lineality

    def is_full_dimensional(self) -> bool:
        return not self.equations

    def is_zero(self) -> bool:
        return not self.rays and not self.lineality

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.dim:
            raise DimensionMismatch(f"point of dimension {len(v)} vs cone of dimension {self.dim}")
        return all(dot(e, v) == 0 for e in self.equations) and all(dot(u, v) >= 0 for u in self.facets)

    def contains_cone(self, other: "Cone") -> bool:
        if other.dim != self.dim:
            raise DimensionMismatch("cones live in different spaces")
        return all(self.contains(g) for g in other.generators)

    def relint_point(self) -> tuple[int, ...]:
        pt = [0] * self.dim
        for r in self.rays:
            pt = [x + y for x, y in zip(pt, r)]
        return tuple(pt)

    def relint_contains(self, v: Sequence) -> bool:
        if len(v) != self.dim:
            raise DimensionMismatch(f"point of dimension {len(v)} vs cone of dimension {self.dim}")
        return all(dot(e, v) == 0 for e in self.equations) and all(dot(u, v) > 0 for u in self.facets)

    def span(self) -> Subspace:
        return Subspace(list(self.rays) + list(self.lineality), self.dim)

    def linear_span_cone(self) -> "Cone":
        return Cone.from_generators(self.dim, (), list(self.rays) + list(self.lineality))

    # -- constructions -----------------------------------------------
    def dual(self) -> "Cone":
        return Cone(self.dim, self.facets, self.equations, self.rays, self.lineality)

    def intersection(self, other: "Cone") -> "Cone":
        if other.dim != self.dim:
            raise DimensionMismatch("cones live in different spaces")
        return Cone.from_inequalities(
            self.dim, list(self.facets) + list(other.facets), list(self.equations) + list(other.equations)
        )

    def face(self, normals: Iterable[Sequence]) -> "Cone":
        """The face cut out by <u,x> = 0 for the given valid inequalities u."""
        normals = list(normals)
        rays = [r for r in self.rays if all(dot(u, r) == 0 for u in normals)]
        return Cone.from_generators(self.dim, rays, self.lineality)

    def faces(self) -> list["Cone"]:
        """All faces, from the minimal one (lineality space) to the cone itself."""
        ray_sets = {frozenset(range(len(self.rays)))}
        for u in self.facets:
            on = frozenset(i for i, r in enumerate(self.rays) if dot(u, r) == 0)
            ray_sets |= {s & on for s in ray_sets}
        out = {Cone.from_generators(self.dim, [self.rays[i] for i in s], self.lineality) for s in ray_sets}
        return sorted(out, key=lambda c: (c.dimension, c.key()))

    def is_face_of(self, other: "Cone") -> bool:
        """True iff ``self`` is a face of ``other``."""
        if not other.contains_cone(self):
            return False
        p = self.relint_point()
        tight = [u for u in other.facets if dot(u, p) == 0]
        return other.face(tight) == self


def _rank0(rows, dim):
    return rank(rows, dim) if rows else 0


def _hrep_from_generators(dim, rays, lin, ineq_cands):
    """Facet normals and equations of cone(rays) + span(lin), given candidate inequalities."""
    eq_basis = nullspace(list(rays) + list(lin), dim)
    eq_space = Subspace(eq_basis, dim)
    cone_dim = dim - len(eq_space)
    facets = []
    for a in ineq_cands:
        if eq_space.contains(a):
            continue
        on = [r for r in rays if dot(a, r) == 0]
        if _rank0(on + list(lin), dim) == cone_dim - 1:
            facets.append(a)
    return facets, eq_basis


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def faces(c: Cone) -> list[Cone]:
    return c.faces()


def relint_contains(c: Cone, v: Sequence) -> bool:
    return c.relint_contains(v)
