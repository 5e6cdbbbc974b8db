"""JSON encoding of kernel and domain objects.

Rationals are strings "p/q" (or "p"), infinity is "inf"; integer vectors
(rays, normals, exponents) are plain JSON integers. Decoders accept ints or
strings for rationals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .colored_fans import Color, ColoredCone, ColoredFan, Palette
from .fan_builder import GammaTorus, HatFan, LatticeLayout, LiftData, ToricFan, irrelevant_monomials
from .qpoly import INF, Cone, LinearMap, PolyhedralComplex, Polyhedron, ext, qvec
from .spherical import SpaceDescriptor, SphericalTrop
from .trop_engine import ExtendedComplex, TropicalPolynomial


def q(x) -> str:
    return "inf" if x is INF else str(Fraction(x))


def qs(v) -> list[str]:
    return [q(x) for x in v]


def ints(v) -> list[int]:
    return [int(x) for x in v]


# -- cones and polyhedra ---------------------------------------------------


def cone_to_json(c: Cone) -> dict:
    return {
        "dim": c.dim,
        "rays": [ints(r) for r in c.rays],
        "lineality": [ints(l) for l in c.lineality],
        "facets": [ints(u) for u in c.facets],
        "equations": [ints(e) for e in c.equations],
    }


def cone_from_json(obj: dict, dim: int | None = None) -> Cone:
    dim = obj.get("dim", dim)
    if dim is None:
        raise ValueError("cone without a dimension")
    if "rays" in obj or "lineality" in obj:
        return Cone.from_generators(dim, [qvec(r) for r in obj.get("rays", [])],
                                    [qvec(l) for l in obj.get("lineality", [])])
    return Cone.from_inequalities(dim, [qvec(a) for a in obj.get("facets", [])],
                                  [qvec(e) for e in obj.get("equations", [])])


def polyhedron_to_json(p: Polyhedron) -> dict:
    if p.is_empty():
        return {"dim": p.dim, "empty": True}
    return {
        "dim": p.dim,
        "points": [qs(v) for v in p.vertices],
        "rays": [ints(r) for r in p.rays],
        "lines": [ints(l) for l in p.lines],
        "inequalities": [{"a": ints(a), "b": q(b)} for a, b in p.inequalities()],
        "equations": [{"a": ints(a), "b": q(b)} for a, b in p.equations()],
    }


def polyhedron_from_json(obj: dict) -> Polyhedron:
    dim = obj["dim"]
    if obj.get("empty"):
        return Polyhedron.empty(dim)
    if "points" in obj:
        return Polyhedron.from_generators(
            dim, [qvec(v) for v in obj["points"]], [qvec(r) for r in obj.get("rays", [])],
            [qvec(l) for l in obj.get("lines", [])],
        )
    return Polyhedron.from_inequalities(
        dim,
        [(qvec(h["a"]), ext(h["b"])) for h in obj.get("inequalities", [])],
        [(qvec(h["a"]), ext(h["b"])) for h in obj.get("equations", [])],
    )


def complex_to_json(c: PolyhedralComplex) -> dict:
    return {"dim": c.dim, "cells": [polyhedron_to_json(p) for p in c.cells]}


def complex_from_json(obj: dict) -> PolyhedralComplex:
    return PolyhedralComplex(obj["dim"], [polyhedron_from_json(p) for p in obj["cells"]])


def map_to_json(m: LinearMap) -> dict:
    return {"domain": m.domain, "codomain": m.codomain, "matrix": [qs(r) for r in m.matrix]}


def map_from_json(obj) -> LinearMap:
    if isinstance(obj, list):
        return LinearMap.from_rows([qvec(r) for r in obj])
    return LinearMap(tuple(qvec(r) for r in obj["matrix"]), obj["domain"], obj["codomain"])


# -- polynomials and descriptors ---------------------------------------------


def polynomial_to_json(f: TropicalPolynomial) -> dict:
    out: dict[str, Any] = {"terms": [{"exponent": ints(e), "valuation": q(c)} for e, c in f.terms]}
    if f.names:
        out["variables"] = list(f.names)
    return out


def polynomial_from_json(obj: dict, nvars: int | None = None) -> TropicalPolynomial:
    terms = [(tuple(t["exponent"]), ext(t.get("valuation", 0))) for t in obj["terms"]]
    if not terms:
        raise ValueError("polynomial without terms")
    n = nvars if nvars is not None else len(terms[0][0])
    return TropicalPolynomial(n, tuple(terms), tuple(obj.get("variables", ())))


def layout_to_json(l: LatticeLayout) -> dict:
    return {"r": l.r, "s": list(l.s), "m": l.m, "color_ids": list(l.color_ids)}


def lift_to_json(lift: LiftData) -> dict:
    return {
        "pi_star": [qs(r) for r in lift.pi_star.matrix],
        "color_map": [{"bold": c, "block": i + 1} for c, i in lift.color_map],
        "eta": list(lift.eta),
    }


def lift_from_json(obj: dict, small_dim: int) -> LiftData:
    rows = [qvec(r) for r in obj["pi_star"]]
    return LiftData(
        LinearMap.from_rows(rows, small_dim),
        tuple((c["bold"], int(c["block"]) - 1) for c in obj.get("color_map", [])),
        tuple(obj.get("eta", [])),
    )


def descriptor_to_json(d: SpaceDescriptor) -> dict:
    out = layout_to_json(d.layout)
    out["generators"] = [polynomial_to_json(g) for g in d.generators]
    if d.name:
        out["name"] = d.name
    return out


def descriptor_from_json(obj: dict, lift: dict | None = None) -> SpaceDescriptor:
    layout = LatticeLayout(obj["r"], tuple(obj["s"]), obj.get("m", 0), tuple(obj.get("color_ids", ())))
    gens = tuple(polynomial_from_json(g, layout.big_dim) for g in obj.get("generators", []))
    lift_data = lift_from_json(lift, layout.small_dim) if lift else None
    return SpaceDescriptor(layout, gens, lift_data, obj.get("name", ""))


# -- colored fans ------------------------------------------------------------


def palette_to_json(p: Palette) -> list:
    return [{"id": c.id, "rho": qs(c.rho), "rank": c.rank} for c in p.colors]


def palette_from_json(obj: list, dim: int) -> Palette:
    return Palette(dim, tuple(Color(c["id"], qvec(c["rho"]), c.get("rank", 1)) for c in obj))


def colored_cone_to_json(cc: ColoredCone) -> dict:
    return {
        "rays": [ints(r) for r in cc.sigma.rays],
        "lineality": [ints(l) for l in cc.sigma.lineality],
        "colors": sorted(cc.colors),
    }


def colored_cone_from_json(obj: dict, dim: int) -> ColoredCone:
    sigma = Cone.from_generators(dim, [qvec(r) for r in obj.get("rays", [])],
                                 [qvec(l) for l in obj.get("lineality", [])])
    return ColoredCone(sigma, frozenset(obj.get("colors", [])))


def fan_to_json(f: ColoredFan) -> dict:
    return {
        "dim": f.dim,
        "palette": palette_to_json(f.palette),
        "valuation_cone": cone_to_json(f.valuation_cone),
        "cones": [colored_cone_to_json(cc) for cc in f.cones],
    }


def fan_from_json(obj: dict, palette: Palette | None = None, V: Cone | None = None) -> ColoredFan:
    if "palette" in obj:
        palette = palette_from_json(obj["palette"], obj.get("dim", palette.dim if palette else None))
    if palette is None:
        raise ValueError("colored fan needs a palette (or a descriptor)")
    dim = palette.dim
    if "valuation_cone" in obj:
        V = cone_from_json(obj["valuation_cone"], dim)
    if V is None:
        raise ValueError("colored fan needs a valuation cone (or a descriptor to compute it)")
    return ColoredFan(palette, V, tuple(colored_cone_from_json(c, dim) for c in obj["cones"]))


# -- toric fans ----------------------------------------------------------------


def _ray_index(rays: list, cone: Cone) -> list[int]:
    return sorted(rays.index(r) for r in cone.rays)


def toric_fan_to_json(t: ToricFan, colored: ColoredFan | None = None) -> dict:
    rays = t.rays()
    names = t.layout.coordinate_names() if t.layout else None
    all_cc = colored.all_cones() if colored else []
    prov = []
    for cone in t.cones():
        for cc, a in t.provenance.get(cone, []):
            entry = {
                "cone": _ray_index(rays, cone),
                "colored_cone": colored_cone_to_json(cc),
                "a": [names[x] for x in sorted(a)] if names else sorted(a),
            }
            if cc in all_cc:
                entry["colored_cone_id"] = all_cc.index(cc)
            prov.append(entry)
    return {
        "dim": t.dim,
        "coordinates": names or [],
        "rays": [ints(r) for r in rays],
        "maximal_cones": [_ray_index(rays, c) for c in t.maximal],
        "provenance": prov,
    }


def hat_to_json(h: HatFan, g: GammaTorus) -> dict:
    rays = sorted({r for c in h.maximal for r in c.rays})
    return {
        "dim": h.dim,
        "variables": h.variable_names(),
        "uncolored_rays": [ints(u) for u in h.rays_u],
        "rays": [ints(r) for r in rays],
        "maximal_cones": [_ray_index(rays, c) for c in h.maximal],
        "p_star": [qs(r) for r in h.p_star.matrix],
        "gamma": [ints(r) for r in g.rows],
        "irrelevant_monomials": [ints(m) for m in irrelevant_monomials(h)],
    }


# -- tropical outputs ------------------------------------------------------------


def extended_complex_to_json(e: ExtendedComplex) -> dict:
    return {
        "dim": e.dim,
        "pieces": [
            {"cone": cone_to_json(c), "free_coordinates": c.span().free, "complex": complex_to_json(p)}
            for c, p in sorted(e.nonempty().items(), key=lambda kv: (kv[0].dimension, kv[0].key()))
        ],
    }


def spherical_trop_to_json(t: SphericalTrop, fan: ColoredFan | None = None) -> dict:
    all_cc = fan.all_cones() if fan else []
    pieces = []
    for cc, piece in t.nonempty().items():
        entry = {
            "colored_cone": colored_cone_to_json(cc),
            "free_coordinates": cc.sigma.span().free,
            "complex": complex_to_json(piece),
        }
        if cc in all_cc:
            entry["colored_cone_id"] = all_cc.index(cc)
        pieces.append(entry)
    return {"dim": t.dim, "pieces": pieces}


def spherical_trop_from_json(obj: dict) -> SphericalTrop:
    t = SphericalTrop(obj["dim"])
    for p in obj["pieces"]:
        cc = colored_cone_from_json(p["colored_cone"], obj["dim"])
        t.add(cc, complex_from_json(p["complex"]).cells)
    return t
