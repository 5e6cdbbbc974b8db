import random
from itertools import chain, combinations

import pytest

from cases import BLOWUP, P2_MINUS_0, PLANE_LAYOUT, SL3_LAYOUT, redblue_fan
from randfans import random_fans
from sphtrop.colored_fans import ColoredCone, ColoredFan, Palette, colored_face, relint_meets
from sphtrop.errors import DimensionMismatch, DomainError, NonPolyhedralFan
from sphtrop.fan_builder import (
    LatticeLayout,
    LiftData,
    build_fan_Z,
    build_fan_Zhat,
    build_sigma_a,
    enumerate_A,
    fan_axiom_violations,
    in_A,
    irrelevant_monomials,
    lift_colored_fan,
    maximal_A,
    p_star_image,
)
from sphtrop.qpoly import Cone, LinearMap, linear_image


def powerset(xs):
    return chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))


def brute_A(layout, colored_blocks, exact_one=False):
    out = set()
    for a in powerset(range(sum(layout.s))):
        ok = True
        for i, blk in enumerate(layout.blocks()):
            missing = len(set(blk) - set(a))
            if exact_one:
                ok &= missing == 1 or (i in colored_blocks and missing == 0)
            else:
                ok &= missing >= 1 or i in colored_blocks
        if ok:
            out.add(frozenset(a))
    return out


def test_layout_names_and_inclusion():
    L = LatticeLayout(2, (2, 1), 1)
    assert L.coordinate_names() == ["v11", "v12", "v21", "w1"]
    assert L.variable_names() == ["S11", "S12", "S21", "T1"]
    assert L.inc()((1, 2, 3)) == (1, 1, 2, 3)
    assert L.small_dim == 3 and L.big_dim == 4
    with pytest.raises(DomainError):
        LatticeLayout(2, (1,), 0)


@pytest.mark.parametrize("s", [(1,), (2,), (3,), (2, 2), (1, 3)])
@pytest.mark.parametrize("colored", [(), (0,)])
@pytest.mark.parametrize("exact_one", [False, True])
def test_enumerate_A_matches_bruteforce(s, colored, exact_one):
    # oracle: filter the full power set by the block rule
    L = LatticeLayout(len(s), s, 0)
    colors = [L.color_ids[i] for i in colored]
    got = list(enumerate_A(L, colors, exact_one))
    assert len(got) == len(set(got))
    assert set(got) == brute_A(L, set(colored), exact_one)
    if not exact_one:
        assert all(in_A(L, a, colors) for a in got)


def test_maximal_A_are_the_maximal_elements():
    L = LatticeLayout(2, (2, 3), 0)
    for colors in ([], ["D1"]):
        allA = set(enumerate_A(L, colors))
        maxi = {a for a in allA if not any(a < b for b in allA)}
        assert set(maximal_A(L, colors)) == maxi


def test_sigma_a_rejects_sets_outside_A():
    cc = ColoredCone(Cone.from_generators(1, [(1,)]))
    with pytest.raises(DomainError):
        build_sigma_a(cc, {0, 1}, PLANE_LAYOUT)
    assert build_sigma_a(cc, {0}, PLANE_LAYOUT) == Cone.from_generators(2, [(1, 0), (1, 1)])


def test_blowup_fan():
    # rays v11, v12, (1,1); maximal cones cone(v11,(1,1)) and cone(v12,(1,1))
    t = build_fan_Z(BLOWUP, PLANE_LAYOUT)
    assert t.rays() == [(0, 1), (1, 0), (1, 1)]
    assert set(t.maximal) == {Cone.from_generators(2, [(1, 0), (1, 1)]), Cone.from_generators(2, [(0, 1), (1, 1)])}
    diag = Cone.from_generators(2, [(1, 1)])
    cc, a = t.origin(diag)
    assert cc.sigma.dimension == 1 and a == frozenset()
    cc, a = t.origin(Cone.from_generators(2, [(1, 0)]))
    assert cc.sigma.dimension == 0 and a == {0}


def test_p2_minus_point_fan():
    t = build_fan_Z(P2_MINUS_0, PLANE_LAYOUT)
    assert t.rays() == [(-1, -1), (0, 1), (1, 0)]
    assert set(t.maximal) == {Cone.from_generators(2, [(-1, -1), (1, 0)]), Cone.from_generators(2, [(-1, -1), (0, 1)])}


def test_gamma_rows_and_irrelevant_ideal():
    hat, gamma = build_fan_Zhat(BLOWUP, PLANE_LAYOUT)
    assert gamma.rows == ((-1, -1, 1),)
    assert gamma.columns == ("S11", "S12", "E1")
    assert irrelevant_monomials(hat) == [(0, 1, 0), (1, 0, 0)]
    hat, gamma = build_fan_Zhat(P2_MINUS_0, PLANE_LAYOUT)
    assert gamma.rows == ((1, 1, 1),)


def test_exact_one_variant_gives_same_maximal_cones_here():
    for fan in (BLOWUP, P2_MINUS_0):
        assert set(build_fan_Z(fan, PLANE_LAYOUT).maximal) == set(build_fan_Z(fan, PLANE_LAYOUT, exact_one=True).maximal)


def test_non_polyhedral_fan_rejected():
    with pytest.raises(NonPolyhedralFan):
        build_fan_Z(redblue_fan(), SL3_LAYOUT)
    with pytest.raises(NonPolyhedralFan):
        build_fan_Zhat(redblue_fan(), SL3_LAYOUT)


def test_non_strictly_convex_fan_rejected():
    V = Cone.full(1)
    fan = ColoredFan(PLANE_LAYOUT.palette(), V, (ColoredCone(Cone.full(1)),))
    with pytest.raises(DomainError):
        build_fan_Z(fan, PLANE_LAYOUT)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        build_fan_Z(BLOWUP, SL3_LAYOUT)


def test_colored_cone_in_sl3_space():
    V = Cone.from_inequalities(2, [(-1, -1)])
    fan = ColoredFan(SL3_LAYOUT.palette(), V, (ColoredCone(Cone.from_generators(2, [(1, 0), (-2, 1)]), {"Vx3"}),))
    t = build_fan_Z(fan, SL3_LAYOUT)
    assert not fan_axiom_violations(t.maximal)
    # colored block 1 may be entirely inside 𝔞, so the top cones are 3 + 2 + 1 dimensional
    assert max(c.dimension for c in t.maximal) == 6
    # the whole colored block spans a face although rho(Vx3) alone is not a colored cone
    block = Cone.from_generators(6, [SL3_LAYOUT.unit(i) for i in range(3)])
    cc, a = t.origin(block)
    assert cc.colors == {"Vx3"} and cc.sigma.dimension == 2 and a == {0, 1, 2}


def test_lift_colored_fan_and_pstar():
    # bold space Q^1 with one color at +1; lift to r=1, s=(2,), m=1 with pi_*(a, b) = a + b
    bold_p = Palette(1, ())
    bold = ColoredFan(bold_p, Cone.full(1), (ColoredCone(Cone.from_generators(1, [(1,)])),))
    layout = LatticeLayout(1, (2,), 1)
    lift = LiftData(LinearMap.from_rows([[0, 1]]))
    lifted = lift_colored_fan(bold, lift, layout)
    assert lifted.cones[0].sigma == Cone.from_generators(2, [(0, 1)])
    assert lifted.valuation_cone == Cone.full(2)
    hat, _ = build_fan_Zhat(lifted, layout)
    for cone, entries in hat.provenance.items():
        for cc, a in entries:
            assert p_star_image(hat, cone) == build_sigma_a(cc, a, layout)


def test_lift_rejects_missing_color():
    bold_p = Palette(1, ())
    bold = ColoredFan(bold_p, Cone.full(1), ())
    lift = LiftData(LinearMap.from_rows([[1, 1]]), (("X", 0),))
    with pytest.raises(DomainError):
        lift.block_of("Y")
    with pytest.raises(DomainError):
        lift_colored_fan(bold, LiftData(LinearMap.from_rows([[1, 0]])), LatticeLayout(1, (2,), 1))


def test_built_fans_satisfy_axioms_and_laws():
    rng = random.Random(1)
    for layout, fan in random_fans(7, 25):
        t = build_fan_Z(fan, layout)
        cones = t.cones()
        assert not fan_axiom_violations(t.maximal)
        assert all(c in t.provenance for c in cones)
        known = set(cones)
        for c in rng.sample(cones, min(4, len(cones))):
            assert set(c.faces()) <= known
        allc = fan.all_cones()
        for cc in allc:
            if not cc.colors:
                for a in maximal_A(layout, cc.colors):
                    assert build_sigma_a(cc, a, layout).dimension == len(a) + cc.sigma.dimension


def test_provenance_intersection_law_sample():
    rng = random.Random(3)
    for layout, fan in random_fans(11, 15):
        V, p = fan.valuation_cone, fan.palette
        maxi = fan.maximal_cones()
        for s1, s2 in combinations(maxi, 2) if len(maxi) > 1 else [(maxi[0], maxi[0])]:
            inter = s1.sigma.intersection(s2.sigma)
            if not relint_meets(inter, V):
                continue
            s3 = colored_face(s1, inter, p)
            a1 = rng.choice(maximal_A(layout, s1.colors))
            a2 = rng.choice(maximal_A(layout, s2.colors))
            lhs = build_sigma_a(s1, a1, layout).intersection(build_sigma_a(s2, a2, layout))
            assert lhs == build_sigma_a(s3, a1 & a2, layout)


def test_hat_projection_law_on_random_fans():
    for layout, fan in random_fans(5, 10):
        hat, gamma = build_fan_Zhat(fan, layout)
        for cone, entries in hat.provenance.items():
            cc, a = entries[0]
            assert linear_image(hat.p_star, cone) == build_sigma_a(cc, a, layout)
        for row in gamma.rows:
            assert not any(hat.p_star(row))
