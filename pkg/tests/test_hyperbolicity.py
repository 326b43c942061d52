from fractions import Fraction

import pytest

from spectracert.graphs import cycle_graph
from spectracert.hyperbolicity import (
    BOUNDARY,
    EXTERIOR,
    INTERIOR,
    NonRealSpectrum,
    cone_inclusion_sample_test,
    cone_membership,
    derivative_relaxation_check,
    eigenvalues,
    hyperbolicity_sample_test,
)
from spectracert.matchpoly import matching_poly, matching_registry
from spectracert.polycore import MultiPoly, Var, VarRegistry


@pytest.fixture
def xyz():
    reg = VarRegistry([Var("x", i, n) for i, n in enumerate("xyz")])
    return reg, [MultiPoly.var(reg, v) for v in reg.vars]


def test_product_of_coordinates(xyz):
    reg, (x, y, z) = xyz
    h = x * y * z
    ev = eigenvalues(h, [1, 1, 1], [2, Fraction(-1, 2), 0])
    assert [r.multiplicity for r in ev.roots] == [1, 1, 1]
    assert all(abs(a - b) < Fraction(1, 10**9) for a, b in zip(ev.values(), [Fraction(-1, 2), 0, 2]))
    assert ev.roots[1].sign() == 0
    assert cone_membership(h, [1, 1, 1], [1, 2, 3]).status == INTERIOR
    assert cone_membership(h, [1, 1, 1], [0, 2, 3]).status == BOUNDARY
    assert cone_membership(h, [1, 1, 1], [-1, 2, 3]).status == EXTERIOR


def test_lorentz_cone(xyz):
    reg, (x, y, z) = xyz
    h = x * x - y * y - z * z
    e = [1, 0, 0]
    assert hyperbolicity_sample_test(h, e, n=30).passed
    assert cone_membership(h, e, [5, 3, 4]).status == BOUNDARY
    assert cone_membership(h, e, [5, 3, 3]).status == INTERIOR
    assert cone_membership(h, e, [-5, 3, 3]).status == EXTERIOR


def test_non_hyperbolic_detected(xyz):
    reg, (x, y, z) = xyz
    h = x * x + y * y - z * z
    rep = hyperbolicity_sample_test(h, [1, 0, 0], n=30)
    assert not rep.passed
    with pytest.raises(NonRealSpectrum):
        eigenvalues(h, [1, 0, 0], [0, 1, 0])


def test_direction_must_not_vanish(xyz):
    reg, (x, y, z) = xyz
    with pytest.raises(ValueError):
        cone_membership(x * y, [1, 0, 0], [1, 1, 1])


def test_derivative_relaxation(xyz):
    reg, (x, y, z) = xyz
    h = x * y * z
    rep = derivative_relaxation_check(h, [1, 1, 1], n=30)
    assert rep.passed


def test_matching_poly_is_hyperbolic():
    g = cycle_graph(5)
    reg = matching_registry(g)
    mu = matching_poly(g, reg)
    e = [1 if v.kind == "x" else 0 for v in reg.vars]
    assert hyperbolicity_sample_test(mu, e, n=20, seed=4).passed


def test_cone_inclusion_fails_in_wrong_direction(xyz):
    reg, (x, y, z) = xyz
    rep = cone_inclusion_sample_test(x * y * z, x * x - y * y - z * z, [1, 1, 1], n=20)
    assert not rep.passed
    assert rep.to_json()["failures"]
