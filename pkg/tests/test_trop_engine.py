import warnings
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cases import BLOWUP, PLANE_LAYOUT
from sphtrop.errors import DimensionMismatch, DomainError
from sphtrop.fan_builder import build_fan_Z
from sphtrop.qpoly import INF, Cone, PolyhedralComplex, Polyhedron, same_support
from sphtrop.trop_engine import (
    ExtendedPoint,
    PrevarietyOnlyWarning,
    TropicalPolynomial,
    evaluate,
    extended_closure,
    hypersurface,
    prevariety,
    quotient_map,
)

GRID = [Fraction(k, 2) for k in range(-6, 7)]
TP = TropicalPolynomial.from_exponents


def grid(n):
    return product(GRID, repeat=n)


def test_terms_merge_by_minimum():
    f = TropicalPolynomial(1, (((1,), 3), ((1,), 1), ((0,), 0)))
    assert f.terms == (((0,), 0), ((1,), 1))
    assert f((Fraction(-1),)) == 0
    assert f.minimizers((Fraction(-1),)) == [(0,), (1,)]


def test_polynomial_errors():
    with pytest.raises(DomainError):
        TP([])
    with pytest.raises(DimensionMismatch):
        TropicalPolynomial(2, (((1,), 0),))


def test_tropical_line_is_three_rays():
    # frozen from the grid oracle: three rays out of the origin
    h = hypersurface(TP([(1, 0), (0, 1), (0, 0)]))
    assert sorted(c.rays[0] for c in h.cells) == [(-1, -1), (0, 1), (1, 0)]
    assert all(c.vertices == [(0, 0)] for c in h.cells)


def test_binomial_gives_a_line():
    h = hypersurface(TP([(1, 0), (0, 1)]))
    assert len(h.cells) == 1 and h.cells[0].lines == [(1, 1)]


def test_monomial_has_empty_hypersurface():
    assert hypersurface(TP([(1, 2)])).is_empty()


poly2 = st.lists(
    st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-2, 2)), min_size=1, max_size=4
)


@given(poly2)
def test_hypersurface_matches_grid_oracle(terms):
    f = TropicalPolynomial(2, tuple(terms))
    h = hypersurface(f)
    for w in grid(2):
        assert h.contains(w) == oracles.min_twice(f.terms, w)


@given(poly2, poly2)
def test_prevariety_matches_grid_oracle(t1, t2):
    f, g = TropicalPolynomial(2, tuple(t1)), TropicalPolynomial(2, tuple(t2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PrevarietyOnlyWarning)
        pv = prevariety([f, g])
    for w in grid(2):
        assert pv.contains(w) == (oracles.min_twice(f.terms, w) and oracles.min_twice(g.terms, w))


def test_prevariety_warns_for_several_generators():
    f, g = TP([(1, 0), (0, 0)]), TP([(0, 1), (0, 0)])
    with pytest.warns(PrevarietyOnlyWarning):
        pv = prevariety([f, g])
    assert same_support(pv, PolyhedralComplex(2, [Polyhedron.point((0, 0))]))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        prevariety([f, f])


def test_prevariety_edge_cases():
    assert prevariety([], 3) == PolyhedralComplex.full(3)
    with pytest.raises(DimensionMismatch):
        prevariety([])
    with pytest.raises(DimensionMismatch):
        prevariety([TP([(1,), (0,)]), TP([(1, 0), (0, 0)])])


def test_quotient_map_and_extended_points():
    ray = Cone.from_generators(2, [(1, 1)])
    span, proj = quotient_map(ray)
    assert proj.codomain == 1
    p = ExtendedPoint(ray, (3, 1))
    q = ExtendedPoint(ray, (2, 0))
    assert p == q
    assert ExtendedPoint.from_quotient(ray, p.quotient_coordinates()) == p


def test_evaluate():
    ray = Cone.from_generators(2, [(1, 0)])
    mu = ExtendedPoint(ray, (5, 2))
    assert evaluate(mu, (0, 1)) == 2
    assert evaluate(mu, (1, 3)) is INF
    with pytest.raises(DomainError):
        evaluate(mu, (-1, 0))
    with pytest.raises(DimensionMismatch):
        evaluate(mu, (1,))


def test_extended_closure_of_diagonal_line_in_blowup():
    # hand derivation: rec = span(1,1) meets only the relative interiors of {0} and the ray (1,1)
    t = build_fan_Z(BLOWUP, PLANE_LAYOUT)
    line = PolyhedralComplex(2, [Polyhedron.from_inequalities(2, [], [((1, -1), 0)])])
    ext = extended_closure(line, t)
    pieces = ext.nonempty()
    assert set(pieces) == {Cone.zero(2), Cone.from_generators(2, [(1, 1)])}
    assert list(pieces[Cone.from_generators(2, [(1, 1)])].cells) == [Polyhedron.point((0,))]
    lifted = ext.lifted_piece(Cone.from_generators(2, [(1, 1)]))
    assert lifted == [Polyhedron.from_inequalities(2, [], [((1, -1), 0)])]


def test_extended_closure_of_whole_torus_hits_every_orbit():
    t = build_fan_Z(BLOWUP, PLANE_LAYOUT)
    ext = extended_closure(PolyhedralComplex.full(2), t)
    assert set(ext.nonempty()) == set(t.cones())
    for cone, piece in ext.nonempty().items():
        assert piece.dimension == 2 - cone.dimension


def test_extended_closure_dimension_mismatch():
    t = build_fan_Z(BLOWUP, PLANE_LAYOUT)
    with pytest.raises(DimensionMismatch):
        extended_closure(PolyhedralComplex.full(3), t)
