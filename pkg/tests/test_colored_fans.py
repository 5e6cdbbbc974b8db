import pytest
from hypothesis import given
from hypothesis import strategies as st

from cases import SL3, SL3_LAYOUT, redblue_fan
from sphtrop.colored_fans import (
    Color,
    ColoredCone,
    ColoredFan,
    Palette,
    colored_face,
    colored_faces,
    fan_from_rays,
    is_polyhedral,
    is_strictly_convex,
    non_polyhedral_witnesses,
    relint_meets,
    uncolored_rays,
    validate_colored_cone,
    validate_colored_fan,
)
from sphtrop.errors import DimensionMismatch, DomainError
from sphtrop.qpoly import Cone
from sphtrop.spherical import valuation_cone

V_SL3 = Cone.from_inequalities(2, [(-1, -1)])
P = SL3_LAYOUT.palette()


def cc(gens, colors=()):
    return ColoredCone(Cone.from_generators(2, gens), frozenset(colors))


def test_palette_lookup():
    assert P.ids == ["Vx3", "Vy1"]
    assert P.rho("Vy1") == (0, 1)
    assert P["Vx3"].rank == 3
    with pytest.raises(DomainError):
        P["nope"]


def test_palette_rejects_bad_input():
    with pytest.raises(DomainError):
        Palette(1, (Color("a", (1,)), Color("a", (2,))))
    with pytest.raises(DimensionMismatch):
        Palette(2, (Color("a", (1,)),))
    with pytest.raises(DomainError):
        Color("a", (1,), rank=0)


def test_standard_palette():
    p = Palette.standard(2, (2, 3))
    assert p.ids == ["D1", "D2"] and p.rho("D2") == (0, 1)


def test_red_cone_is_valid():
    red = cc([(1, 0), (-2, 1)], {"Vx3"})
    assert validate_colored_cone(red, V_SL3, P).ok
    assert uncolored_rays(red, P) == [(-2, 1)]
    assert is_strictly_convex(red, P)


def test_colored_cone_missing_valuation_cone():
    outside = cc([(1, 0), (0, 1)], {"Vx3", "Vy1"})
    rep = validate_colored_cone(outside, V_SL3, P)
    assert not rep.ok
    assert "interior" in [k for k, _, _ in rep.violations]


def test_uncolored_ray_outside_valuation_cone_breaks_generation():
    bad = cc([(1, 0), (1, -2)])
    rep = validate_colored_cone(bad, V_SL3, P)
    assert "generation" in [k for k, _, _ in rep.violations]


def test_strict_flag():
    zero = Palette(1, (Color("Z", (0,)),))
    c = ColoredCone(Cone.from_generators(1, [(-1,)]), {"Z"})
    V = Cone.full(1)
    assert validate_colored_cone(c, V, zero).ok
    assert not validate_colored_cone(c, V, zero, strict=True).ok


def test_colored_face_inherits_colors():
    red = cc([(1, 0), (-2, 1)], {"Vx3"})
    ray = Cone.from_generators(2, [(1, 0)])
    assert colored_face(red, ray, P).colors == {"Vx3"}
    other = Cone.from_generators(2, [(-2, 1)])
    assert colored_face(red, other, P).colors == frozenset()
    with pytest.raises(DomainError):
        colored_face(red, Cone.from_generators(2, [(0, 1)]), P)


def test_colored_faces_drop_faces_outside_valuation_cone():
    red = cc([(1, 0), (-2, 1)], {"Vx3"})
    faces = colored_faces(red, V_SL3, P)
    # the ray through rho(Vx3) misses V in its relative interior
    assert {f.sigma.dimension for f in faces} == {0, 1, 2}
    assert all(f.sigma != Cone.from_generators(2, [(1, 0)]) for f in faces)


def test_redblue_fan_valid_but_not_polyhedral():
    fan = redblue_fan()
    assert validate_colored_fan(fan).ok
    assert not is_polyhedral(fan)
    (a, b, x), = non_polyhedral_witnesses(fan)
    assert not V_SL3.contains(x)


def test_overlap_inside_valuation_cone_is_rejected():
    f = fan_from_rays(P, V_SL3, [([(-1, 0), (0, -1)], ()), ([(-1, 0), (1, -2)], ())])
    rep = validate_colored_fan(f)
    assert "uniqueness" in [k for k, _, _ in rep.violations]


def test_fan_accessors():
    f = fan_from_rays(P, V_SL3, [([(-1, 0), (0, -1)], ()), ([(0, -1), (1, -2)], ())])
    assert validate_colored_fan(f).ok and is_polyhedral(f)
    assert f.uncolored_rays() == [(-1, 0), (0, -1), (1, -2)]
    assert len(f.maximal_cones()) == 2
    assert f.cone_id(f.all_cones()[0]) == 0
    assert f.is_strictly_convex()


def test_relint_meets():
    assert relint_meets(Cone.from_generators(2, [(-1, 0)]), V_SL3)
    assert not relint_meets(Cone.from_generators(2, [(0, 1)]), V_SL3)


def test_computed_valuation_cone_matches():
    assert valuation_cone(SL3) == V_SL3


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=3))
def test_faces_of_valid_cones_are_valid(gens):
    c = cc([g for g in gens if any(g)] or [(-1, 0)])
    if not validate_colored_cone(c, V_SL3, P).ok:
        return
    for f in colored_faces(c, V_SL3, P):
        assert validate_colored_cone(f, V_SL3, P).ok


def test_fan_dedupes_cones():
    a = cc([(-1, 0)])
    f = ColoredFan(P, V_SL3, (a, a))
    assert len(f.cones) == 1
