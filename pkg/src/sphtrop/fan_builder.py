"""Toric data attached to a spherical embedding.

N = Z^(s_1 + ... + s_r + m) has basis v_11, ..., v_rs_r, w_1, ..., w_m and
receives the valuation lattice through v_i -> v_i1 + ... + v_is_i, w_k -> w_k.
Subsets 𝔞 of {v_ij} are frozensets of coordinate indices of N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from ._parallel import pmap
from .colored_fans import (
    Color,
    ColoredCone,
    ColoredFan,
    Palette,
    colored_faces,
    is_polyhedral,
    uncolored_rays,
)
from .errors import DimensionMismatch, DomainError, NonPolyhedralFan
from .qpoly import Cone, LinearMap, linear_image, preimage, primitive, rank, rref


@dataclass(frozen=True)
class LatticeLayout:
    r: int
    s: tuple[int, ...]
    m: int
    color_ids: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(self.s))
        if len(self.s) != self.r:
            raise DomainError(f"expected {self.r} module ranks, got {len(self.s)}")
        if any(si < 1 for si in self.s):
            raise DomainError("module ranks must be at least 1")
        if self.m < 0:
            raise DomainError("unit rank must be non-negative")
        ids = tuple(self.color_ids) or tuple(f"D{i + 1}" for i in range(self.r))
        if len(ids) != self.r:
            raise DomainError("one color id per block is required")
        object.__setattr__(self, "color_ids", ids)

    @property
    def small_dim(self) -> int:
        return self.r + self.m

    @property
    def big_dim(self) -> int:
        return sum(self.s) + self.m

    def block(self, i: int) -> range:
        start = sum(self.s[:i])
        return range(start, start + self.s[i])

    def blocks(self) -> list[range]:
        return [self.block(i) for i in range(self.r)]

    def w_index(self, k: int) -> int:
        return sum(self.s) + k

    def coordinate_names(self) -> list[str]:
        names = [f"v{i + 1}{j + 1}" for i in range(self.r) for j in range(self.s[i])]
        return names + [f"w{k + 1}" for k in range(self.m)]

    def variable_names(self) -> list[str]:
        names = [f"S{i + 1}{j + 1}" for i in range(self.r) for j in range(self.s[i])]
        return names + [f"T{k + 1}" for k in range(self.m)]

    def color_block(self, cid: str) -> int:
        try:
            return self.color_ids.index(cid)
        except ValueError:
            raise DomainError(f"unknown color id {cid!r}") from None

    def inc(self) -> LinearMap:
        rows = []
        for i, si in enumerate(self.s):
            rows += [[int(c == i) for c in range(self.small_dim)]] * si
        for k in range(self.m):
            rows.append([int(c == self.r + k) for c in range(self.small_dim)])
        return LinearMap.from_rows(rows, self.small_dim)

    def palette(self) -> Palette:
        """rho(D_i) = v_i, the trivial class group situation."""
        return Palette(
            self.small_dim,
            tuple(
                Color(cid, tuple(int(i == j) for j in range(self.small_dim)), si)
                for i, (cid, si) in enumerate(zip(self.color_ids, self.s))
            ),
        )

    def unit(self, idx: int) -> tuple[int, ...]:
        return tuple(int(c == idx) for c in range(self.big_dim))

    def name_subset(self, a: Iterable[int]) -> list[str]:
        names = self.coordinate_names()
        return [names[x] for x in sorted(a)]


def _block_choices(layout: LatticeLayout, colored: set[int], exact_one: bool) -> list[list[tuple[int, ...]]]:
    out = []
    for i, blk in enumerate(layout.blocks()):
        si = len(blk)
        if exact_one:
            sizes = [si - 1, si] if i in colored else [si - 1]
        else:
            sizes = range(si + 1) if i in colored else range(si)
        out.append([c for k in sizes for c in combinations(blk, k)])
    return out


def enumerate_A(layout: LatticeLayout, colors: Iterable[str] = (), exact_one: bool = False) -> Iterator[frozenset]:
    """Stream the subsets 𝔞 ∈ 𝔄(𝔉): every uncolored block misses at least one v_ij.

    With ``exact_one`` uncolored blocks miss exactly one v_ij and colored
    blocks miss at most one.
    """
    colored = {layout.color_block(c) for c in colors}
    for pick in product(*_block_choices(layout, colored, exact_one)):
        yield frozenset(x for part in pick for x in part)


def in_A(layout: LatticeLayout, a: Iterable[int], colors: Iterable[str] = ()) -> bool:
    a = set(a)
    if any(x < 0 or x >= sum(layout.s) for x in a):
        return False
    colored = {layout.color_block(c) for c in colors}
    return all(i in colored or not set(blk) <= a for i, blk in enumerate(layout.blocks()))


def maximal_A(layout: LatticeLayout, colors: Iterable[str] = ()) -> list[frozenset]:
    colored = {layout.color_block(c) for c in colors}
    choices = []
    for i, blk in enumerate(layout.blocks()):
        if i in colored:
            choices.append([tuple(blk)])
        else:
            choices.append([tuple(x for x in blk if x != miss) for miss in blk])
    return [frozenset(x for part in pick for x in part) for pick in product(*choices)]


def sigma_a_generators(cc: ColoredCone, a: Iterable[int], layout: LatticeLayout, palette: Palette) -> list[tuple]:
    inc = layout.inc()
    return [layout.unit(x) for x in sorted(a)] + [primitive(inc(u)) for u in uncolored_rays(cc, palette)]


def build_sigma_a(cc: ColoredCone, a: Iterable[int], layout: LatticeLayout, palette: Palette | None = None) -> Cone:
    """σ_𝔞 = cone(𝔞 ∪ inc(σ(1))) in N_Q."""
    palette = palette or layout.palette()
    a = frozenset(a)
    if cc.sigma.dim != layout.small_dim:
        raise DimensionMismatch("colored cone does not live in the layout's valuation lattice")
    if not in_A(layout, a, cc.colors):
        raise DomainError(f"{layout.name_subset(a)} is not in 𝔄 of the colors {sorted(cc.colors)}")
    return Cone.from_generators(layout.big_dim, sigma_a_generators(cc, a, layout, palette))


Provenance = tuple[ColoredCone, frozenset]


@dataclass
class ToricFan:
    dim: int
    maximal: list[Cone]
    provenance: dict[Cone, list[Provenance]] = field(default_factory=dict)
    layout: LatticeLayout | None = None
    _cones: tuple | None = field(default=None, init=False, repr=False, compare=False)

    def cones(self) -> list[Cone]:
        """All cones of the fan (faces of the maximal cones), sorted by dimension."""
        key = tuple(self.maximal)
        if self._cones is None or self._cones[0] != key:
            out = set()
            for c in self.maximal:
                out.update(c.faces())
            self._cones = (key, sorted(out, key=lambda c: (c.dimension, c.key())))
        return list(self._cones[1])

    def rays(self) -> list[tuple[int, ...]]:
        return sorted({r for c in self.maximal for r in c.rays})

    def origin(self, cone: Cone) -> Provenance:
        """The provenance entry whose colored cone has the smallest dimension.

        That colored cone labels the G-orbit containing the image of the
        torus orbit of ``cone``.
        """
        entries = self.provenance.get(cone)
        if not entries:
            raise DomainError(f"no provenance recorded for {cone!r}")
        return min(entries, key=lambda e: (e[0].sigma.dimension, e[0].key(), sorted(e[1])))


def fan_axiom_violations(cones: Sequence[Cone]) -> list[tuple[Cone, Cone, Cone]]:
    """Pairs of maximal cones whose intersection is not a face of both."""
    bad = []
    for a, b in combinations(cones, 2):
        c = a.intersection(b)
        if not (c.is_face_of(a) and c.is_face_of(b)):
            bad.append((a, b, c))
    return bad


def _require_buildable(fan: ColoredFan, layout: LatticeLayout):
    if fan.dim != layout.small_dim:
        raise DimensionMismatch("colored fan does not live in the layout's valuation lattice")
    for cid in fan.palette.ids:
        layout.color_block(cid)
    if not fan.is_strictly_convex():
        raise DomainError("the fan builder requires a strictly convex colored fan")
    if not is_polyhedral(fan):
        raise NonPolyhedralFan("colored fan is not polyhedral; it has no toric embedding of this kind")


def _inherited_provenance(cone: Cone, fan: ColoredFan, layout: LatticeLayout, jobs, built) -> list[Provenance]:
    """Provenance of a face of Σ_Z that is not itself some τ_𝔟.

    Such faces appear when a color lies outside the valuation cone: the cone
    spanned by a whole colored block is a face of σ_𝔞 although the ray of that
    color is not a colored cone. The face is charged to the smallest colored
    face of σ containing the colors and uncolored rays it involves.
    """
    inc = layout.inc()
    p = fan.palette
    rays = set(cone.rays)
    out = set()
    for (cc, a), big in zip(jobs, built):
        if not cone.is_face_of(big):
            continue
        sub = frozenset(x for x in a if layout.unit(x) in rays)
        gens = [u for u in uncolored_rays(cc, p) if primitive(inc(u)) in rays]
        gens += [p.rho(c) for c in cc.colors if set(layout.block(layout.color_block(c))) <= sub]
        cands = [f for f in colored_faces(cc, fan.valuation_cone, p) if all(f.sigma.contains(g) for g in gens)]
        if cands:
            out.add((min(cands, key=ColoredCone.key), sub))
    return list(out)


def build_fan_Z(
    fan: ColoredFan, layout: LatticeLayout, exact_one: bool = False, check: bool = True
) -> ToricFan:
    _require_buildable(fan, layout)
    p = fan.palette
    maximal_cc = fan.maximal_cones()

    jobs = []
    for cc in maximal_cc:
        if exact_one:
            subsets = [a for a in enumerate_A(layout, cc.colors, exact_one=True)]
        else:
            subsets = maximal_A(layout, cc.colors)
        jobs += [(cc, a) for a in subsets]
    built = pmap(lambda job: Cone.from_generators(layout.big_dim, sigma_a_generators(job[0], job[1], layout, p)), jobs)
    uniq = set(built)
    maximal = sorted(
        (c for c in uniq if not any(d != c and c.is_face_of(d) for d in uniq)), key=lambda c: (-c.dimension, c.key())
    )

    provenance: dict[Cone, list[Provenance]] = {}
    all_jobs = [(cc, a) for cc in fan.all_cones() for a in enumerate_A(layout, cc.colors)]
    all_built = pmap(
        lambda job: Cone.from_generators(layout.big_dim, sigma_a_generators(job[0], job[1], layout, p)), all_jobs
    )
    for (cc, a), cone in zip(all_jobs, all_built):
        provenance.setdefault(cone, []).append((cc, a))
    result = ToricFan(layout.big_dim, maximal, provenance, layout)
    for cone in result.cones():
        if cone not in provenance:
            inherited = _inherited_provenance(cone, fan, layout, jobs, built)
            if inherited:
                provenance[cone] = inherited
    for entries in provenance.values():
        entries.sort(key=lambda e: (e[0].key(), sorted(e[1])))

    if check:
        bad = fan_axiom_violations(maximal)
        if bad:
            a, b, c = bad[0]
            raise DomainError(f"Σ_Z violates the fan axioms: {a!r} ∩ {b!r} = {c!r}")
        missing = [c for c in result.cones() if c not in provenance]
        if missing:
            raise DomainError(f"cones without provenance: {missing}")
    return result


@dataclass
class HatFan:
    layout: LatticeLayout
    n: int
    rays_u: list[tuple[int, ...]]
    maximal: list[Cone]
    p_star: LinearMap
    provenance: dict[Cone, list[Provenance]] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.layout.big_dim + self.n

    def variable_names(self) -> list[str]:
        return self.layout.variable_names() + [f"E{l + 1}" for l in range(self.n)]


@dataclass(frozen=True)
class GammaTorus:
    rows: tuple[tuple[int, ...], ...]
    columns: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.rows)


def gamma_rows(layout: LatticeLayout, rays_u: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    inc = layout.inc()
    n = len(rays_u)
    out = []
    for l, u in enumerate(rays_u):
        iu = inc(u)
        out.append(tuple(int(-x) for x in iu) + tuple(int(l == k) for k in range(n)))
    return out


def build_fan_Zhat(fan: ColoredFan, layout: LatticeLayout, exact_one: bool = False) -> tuple[HatFan, GammaTorus]:
    _require_buildable(fan, layout)
    p = fan.palette
    rays_u = fan.uncolored_rays()
    n = len(rays_u)
    big = layout.big_dim
    inc = layout.inc()

    cols = [layout.unit(x) for x in range(big)] + [primitive(inc(u)) for u in rays_u]
    p_star = LinearMap.from_rows([[c[i] for c in cols] for i in range(big)], big + n)

    def hat_generators(cc: ColoredCone, a: frozenset) -> list[tuple[int, ...]]:
        e = [tuple(int(k == big + rays_u.index(u)) for k in range(big + n)) for u in uncolored_rays(cc, p)]
        return [layout.unit(x) + (0,) * n for x in sorted(a)] + e

    jobs = []
    for cc in fan.maximal_cones():
        subsets = list(enumerate_A(layout, cc.colors, exact_one=True)) if exact_one else maximal_A(layout, cc.colors)
        jobs += [(cc, a) for a in subsets]
    built = pmap(lambda job: Cone.from_generators(big + n, hat_generators(*job)), jobs)
    provenance: dict[Cone, list[Provenance]] = {}
    for job, cone in zip(jobs, built):
        provenance.setdefault(cone, []).append(job)
    uniq = set(built)
    maximal = sorted(
        (c for c in uniq if not any(d != c and c.is_face_of(d) for d in uniq)), key=lambda c: (-c.dimension, c.key())
    )
    rows = gamma_rows(layout, rays_u)
    hat = HatFan(layout, n, rays_u, maximal, p_star, provenance)
    gamma = GammaTorus(tuple(rows), tuple(hat.variable_names()))
    for row in rows:
        if any(p_star(row)):
            raise DomainError("Γ is not contained in the kernel of p")
    return hat, gamma


def irrelevant_monomials(hat: HatFan) -> list[tuple[int, ...]]:
    """One squarefree exponent vector per maximal cone: the variables whose rays it omits.

    Variables are ordered S_ij (row-major), then T_k, then E_l.
    """
    out = set()
    for cone in hat.maximal:
        present = set()
        for r in cone.rays:
            nz = [i for i, x in enumerate(r) if x]
            if len(nz) == 1:
                present.add(nz[0])
        out.add(tuple(0 if i in present else 1 for i in range(hat.dim)))
    return sorted(out)


@dataclass(frozen=True)
class LiftData:
    """Data of the cover G/H -> bold G/H: the pushforward and the color matching.

    ``pi_star`` maps the lifted valuation space Q^(r+m) to the bold one;
    ``color_map`` sends each bold color id to the index i of the block v_i
    of the lifted space that covers it.
    """

    pi_star: LinearMap
    color_map: tuple[tuple[str, int], ...] = ()
    eta: tuple[int, ...] = ()

    def block_of(self, bold_id: str) -> int:
        for cid, i in self.color_map:
            if cid == bold_id:
                return i
        raise DomainError(f"bold color {bold_id!r} has no lifted counterpart")


def _torus_inverse(lift: LiftData, layout: LatticeLayout) -> list[list[Fraction]]:
    pi = lift.pi_star
    r, m = layout.r, layout.m
    if pi.domain != layout.small_dim:
        raise DimensionMismatch("pi_* does not start at the lifted valuation space")
    sub = [[row[r + k] for k in range(m)] for row in pi.matrix]
    if pi.codomain != m or (m and rank(sub, m) != m):
        raise DomainError("pi_* restricted to the span of w_1..w_m is not invertible")
    aug = [list(row) + [int(i == j) for j in range(m)] for i, row in enumerate(sub)]
    red, _ = rref(aug, 2 * m)
    return [row[m:] for row in red]


def lift_colored_fan(bold: ColoredFan, lift: LiftData, layout: LatticeLayout) -> ColoredFan:
    """Pull a bold colored fan back to the lattice of the trivial-class-group cover."""
    inv = _torus_inverse(lift, layout)
    r, m = layout.r, layout.m
    pi = lift.pi_star
    palette = layout.palette()
    bold_p = bold.palette

    def lift_ray(x: Sequence) -> tuple:
        t = [sum(inv[k][j] * x[j] for j in range(m)) for k in range(m)]
        return (0,) * r + tuple(t)

    for cid in bold_p.ids:
        i = lift.block_of(cid)
        if not 0 <= i < r:
            raise DomainError(f"bold color {cid!r} mapped to a missing block {i}")
        image = pi(tuple(int(c == i) for c in range(layout.small_dim)))
        if primitive(image) != primitive(bold_p.rho(cid)) or not any(image):
            raise DomainError(f"pi_*(v_{i + 1}) does not point along rho({cid})")

    cones = []
    for cc in bold.cones:
        colored = {primitive(bold_p.rho(c)): c for c in cc.colors}
        gens, cols = [], set()
        for ray in cc.sigma.rays:
            if ray in colored:
                i = lift.block_of(colored[ray])
                gens.append(tuple(int(c == i) for c in range(layout.small_dim)))
                cols.add(layout.color_ids[i])
            else:
                gens.append(lift_ray(ray))
        if not cc.sigma.is_pointed():
            raise DomainError("only strictly convex bold cones can be lifted")
        cones.append(ColoredCone(Cone.from_generators(layout.small_dim, gens), frozenset(cols)))
    V = preimage(pi, bold.valuation_cone)
    return ColoredFan(palette, V, tuple(cones))


def p_star_image(hat: HatFan, cone: Cone) -> Cone:
    return linear_image(hat.p_star, cone)
