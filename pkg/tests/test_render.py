import pytest

from cases import BLOWUP, PLANE_LAYOUT, SL3_LAYOUT
from sphtrop.errors import DimensionMismatch
from sphtrop.fan_builder import ToricFan, build_fan_Z
from sphtrop.qpoly import Cone, PolyhedralComplex
from sphtrop.render import render_complex, render_fan, render_svg, render_valuation_cone
from sphtrop.trop_engine import TropicalPolynomial, hypersurface

P2 = ToricFan(2, [Cone.from_generators(2, g) for g in ([(1, 0), (0, 1)], [(0, 1), (-1, -1)], [(-1, -1), (1, 0)])])


def test_complete_fan_draws_three_sectors_and_rays():
    svg = render_fan(P2, "P2")
    assert svg.count("<polygon") == 3
    assert svg.count('marker-end') == 3
    assert ">P2<" in svg


def test_tropical_line_is_a_three_ray_star():
    line = hypersurface(TropicalPolynomial.from_exponents([(1, 0), (0, 1), (0, 0)]))
    svg = render_complex(line)
    assert svg.count("<line") == 3 and "<polygon" not in svg


def test_sigma_z_rays_carry_coordinate_names():
    svg = render_fan(build_fan_Z(BLOWUP, PLANE_LAYOUT))
    assert ">v11<" in svg and ">v12<" in svg


def test_one_dimensional_colored_fan():
    svg = render_fan(BLOWUP)
    assert svg.startswith("<svg") and "D1" in svg


def test_valuation_cone_with_colors():
    svg = render_valuation_cone(Cone.from_inequalities(2, [(-1, -1)]), SL3_LAYOUT.palette())
    assert "Vx3" in svg and "Vy1" in svg


def test_large_dimensions_rejected():
    with pytest.raises(DimensionMismatch):
        render_complex(PolyhedralComplex.full(3))
    with pytest.raises(DimensionMismatch):
        render_svg(P2, dim=1)
    with pytest.raises(TypeError):
        render_svg(42)


def test_rendering_is_deterministic():
    assert render_svg(P2) == render_svg(P2)
    assert render_svg(BLOWUP) == render_svg(BLOWUP)
