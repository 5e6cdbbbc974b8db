"""Colored cones and colored fans in the lattice of G-invariant valuations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DimensionMismatch, DomainError
from .qpoly import Cone, primitive, qvec


@dataclass(frozen=True)
class Color:
    id: str
    rho: tuple[Fraction, ...]
    rank: int = 1

    def __post_init__(self):
        object.__setattr__(self, "rho", qvec(self.rho))
        if self.rank < 1:
            raise DomainError(f"color {self.id} has rank {self.rank} < 1")


@dataclass(frozen=True)
class Palette:
    dim: int
    colors: tuple[Color, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        ids = [c.id for c in self.colors]
        if len(set(ids)) != len(ids):
            raise DomainError(f"duplicate color ids in palette: {ids}")
        for c in self.colors:
            if len(c.rho) != self.dim:
                raise DimensionMismatch(f"rho({c.id}) has dimension {len(c.rho)}, expected {self.dim}")

    @classmethod
    def standard(cls, dim: int, ranks: Sequence[int], prefix: str = "D") -> "Palette":
        """Colors D1..Dr with rho(D_i) = e_i, the trivial class group situation."""
        return cls(
            dim,
            tuple(
                Color(f"{prefix}{i + 1}", tuple(int(i == j) for j in range(dim)), s) for i, s in enumerate(ranks)
            ),
        )

    def __getitem__(self, cid: str) -> Color:
        for c in self.colors:
            if c.id == cid:
                return c
        raise DomainError(f"unknown color id {cid!r}")

    @property
    def ids(self) -> list[str]:
        return [c.id for c in self.colors]

    def index(self, cid: str) -> int:
        self[cid]
        return self.ids.index(cid)

    def rho(self, cid: str) -> tuple[Fraction, ...]:
        return self[cid].rho


@dataclass(frozen=True)
class ColoredCone:
    sigma: Cone
    colors: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "colors", frozenset(self.colors))

    def key(self):
        return (self.sigma.dimension, self.sigma.key(), tuple(sorted(self.colors)))

    def __repr__(self):
        cols = "{" + ", ".join(sorted(self.colors)) + "}"
        return f"ColoredCone({self.sigma!r}, {cols})"


@dataclass
class Report:
    """Outcome of a validation: ``ok`` plus (kind, message, witness) triples."""

    violations: list[tuple[str, str, object]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, kind: str, message: str, witness=None):
        self.violations.append((kind, message, witness))

    def extend(self, other: "Report"):
        self.violations.extend(other.violations)


def _check_colors(cc: ColoredCone, p: Palette):
    for cid in cc.colors:
        p[cid]
    if cc.sigma.dim != p.dim:
        raise DimensionMismatch(f"cone in dimension {cc.sigma.dim}, palette in dimension {p.dim}")


def relint_meets(sigma: Cone, V: Cone) -> bool:
    """Whether the relative interior of ``sigma`` meets ``V``.

    If it does, the whole relative interior of sigma ∩ V lies in relint(sigma),
    so it suffices to test one relative-interior point of the intersection.
    """
    return sigma.relint_contains(sigma.intersection(V).relint_point())


def uncolored_rays(cc: ColoredCone, p: Palette) -> list[tuple[int, ...]]:
    """sigma(1): extremal rays of sigma containing no rho(D) with D a color of the cone."""
    out = []
    colored = [primitive(p.rho(c)) for c in cc.colors]
    for r in cc.sigma.rays:
        if r not in colored:
            out.append(r)
    return out


def is_strictly_convex(cc: ColoredCone, p: Palette) -> bool:
    return cc.sigma.is_pointed() and all(any(p.rho(c)) for c in cc.colors)


def validate_colored_cone(cc: ColoredCone, V: Cone, p: Palette, strict: bool = False) -> Report:
    _check_colors(cc, p)
    rep = Report()
    sigma = cc.sigma
    inside = sigma.intersection(V)
    gens = [p.rho(c) for c in sorted(cc.colors)] + list(inside.rays)
    rebuilt = Cone.from_generators(sigma.dim, gens, inside.lineality)
    if rebuilt != sigma:
        rep.add(
            "generation",
            "cone is not generated by the images of its colors and vectors of the valuation cone",
            {"cone": sigma, "generated": rebuilt},
        )
    witness = inside.relint_point()
    if not sigma.relint_contains(witness):
        rep.add("interior", "relative interior of the cone misses the valuation cone", {"cone": sigma})
    if strict and not is_strictly_convex(cc, p):
        rep.add("strict-convexity", "cone has lineality or a color maps to 0", {"cone": sigma})
    return rep


def colored_face(cc: ColoredCone, tau: Cone, p: Palette) -> ColoredCone:
    _check_colors(cc, p)
    if not tau.is_face_of(cc.sigma):
        raise DomainError(f"{tau!r} is not a face of {cc.sigma!r}")
    return ColoredCone(tau, frozenset(c for c in cc.colors if tau.contains(p.rho(c))))


def colored_faces(cc: ColoredCone, V: Cone, p: Palette) -> list[ColoredCone]:
    """Faces of cc that are colored cones, i.e. whose relative interior meets V."""
    return [colored_face(cc, tau, p) for tau in cc.sigma.faces() if relint_meets(tau, V)]


@dataclass(frozen=True)
class ColoredFan:
    palette: Palette
    valuation_cone: Cone
    cones: tuple[ColoredCone, ...]

    def __post_init__(self):
        uniq = sorted(set(self.cones), key=ColoredCone.key)
        object.__setattr__(self, "cones", tuple(uniq))
        if self.valuation_cone.dim != self.palette.dim:
            raise DimensionMismatch("valuation cone and palette live in different spaces")
        for cc in uniq:
            _check_colors(cc, self.palette)

    @property
    def dim(self) -> int:
        return self.palette.dim

    def all_cones(self) -> list[ColoredCone]:
        """Every colored cone of the fan (members and their colored faces), sorted."""
        out = set()
        for cc in self.cones:
            out.update(colored_faces(cc, self.valuation_cone, self.palette))
        return sorted(out, key=ColoredCone.key)

    def maximal_cones(self) -> list[ColoredCone]:
        allc = self.all_cones()
        return [
            a
            for a in allc
            if not any(b != a and a.sigma != b.sigma and a.sigma.is_face_of(b.sigma) for b in allc)
        ]

    def cone_id(self, cc: ColoredCone) -> int:
        return self.all_cones().index(cc)

    def uncolored_rays(self) -> list[tuple[int, ...]]:
        """The rays u_1..u_n of the fan without color, sorted."""
        rays = set()
        for cc in self.all_cones():
            if cc.sigma.dimension == 1 and not cc.colors:
                rays.add(cc.sigma.rays[0])
        return sorted(rays)

    def is_strictly_convex(self) -> bool:
        return all(is_strictly_convex(cc, self.palette) for cc in self.cones)


def validate_colored_fan(f: ColoredFan) -> Report:
    rep = Report()
    V, p = f.valuation_cone, f.palette
    for cc in f.cones:
        rep.extend(validate_colored_cone(cc, V, p))
    if not rep.ok:
        return rep
    members = list(f.cones)
    # stored cones that are faces of each other must agree on colors
    for a in members:
        for b in members:
            if a is not b and a.sigma.is_face_of(b.sigma) and relint_meets(a.sigma, V):
                expected = colored_face(b, a.sigma, p)
                if expected.colors != a.colors:
                    rep.add("face-colors", "stored face carries the wrong colors", {"face": a, "of": b})
    allc = f.all_cones()
    for a, b in combinations(allc, 2):
        inter = a.sigma.intersection(b.sigma).intersection(V)
        x = inter.relint_point()
        if a.sigma.relint_contains(x) and b.sigma.relint_contains(x):
            rep.add(
                "uniqueness",
                "two colored cones share a relative-interior point of the valuation cone",
                {"cones": (a, b), "point": x},
            )
    return rep


def is_polyhedral(f: ColoredFan) -> bool:
    return not non_polyhedral_witnesses(f)


def non_polyhedral_witnesses(f: ColoredFan) -> list[tuple[ColoredCone, ColoredCone, tuple]]:
    out = []
    for a, b in combinations(f.all_cones(), 2):
        x = a.sigma.intersection(b.sigma).relint_point()
        if a.sigma.relint_contains(x) and b.sigma.relint_contains(x):
            out.append((a, b, x))
    return out


def fan_from_rays(
    palette: Palette, V: Cone, maximal: Iterable[tuple[Iterable[Sequence], Iterable[str]]]
) -> ColoredFan:
    """Convenience constructor: each entry is (generators, color ids)."""
    return ColoredFan(
        palette, V, tuple(ColoredCone(Cone.from_generators(palette.dim, gens), frozenset(cols)) for gens, cols in maximal)
    )
