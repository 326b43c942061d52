from fractions import Fraction

import numpy as np
import pytest
from conftest import small_graphs, small_trees
from hypothesis import given

from spectracert.graphs import Graph, complete_graph, cycle_graph, disjoint_union, fig1_graph, path_graph
from spectracert.matchpoly import (
    eta,
    eta_path_tree,
    eta_path_tree_value,
    evaluate_factors,
    expand_factors,
    heilmann_lieb_poly,
    key_polynomial,
    matching_activities,
    matching_numbers,
    matching_poly,
    matching_poly_univariate,
    matching_registry,
    path_tree_quotient,
    path_tree_quotient_factors,
    random_activities,
    wagner_by_edge_recurrence,
    wagner_poly,
)
from spectracert.polycore import MultiPoly, UniPoly
from spectracert.trees import path_tree


@pytest.mark.parametrize(
    "g, coeffs",
    [
        (complete_graph(4), [3, 0, -6, 0, 1]),
        (cycle_graph(5), [0, 5, 0, -5, 0, 1]),
        (complete_graph(5), [0, 15, 0, -10, 0, 1]),
        (cycle_graph(6), [-2, 0, 9, 0, -6, 0, 1]),
    ],
)
def test_univariate_values(g, coeffs):
    assert matching_poly_univariate(g) == UniPoly(coeffs)


def test_matching_numbers():
    assert matching_numbers(complete_graph(4)) == [1, 6, 3]
    assert matching_numbers(path_graph(4)) == [1, 3, 1]


@given(small_graphs(max_n=5))
def test_methods_agree(g):
    reg = matching_registry(g)
    assert matching_poly(g, reg, "recursion") == matching_poly(g, reg, "enumeration")


@given(small_trees())
def test_forest_dp_agrees(t):
    reg = matching_registry(t)
    assert matching_poly(t, reg, "forest") == matching_poly(t, reg, "recursion")


@given(small_graphs(min_n=2))
def test_vertex_recursion(g):
    reg = matching_registry(g)
    u = g.vertices[0]
    x_u = MultiPoly.var(reg, reg.find("x", u))
    rhs = x_u * matching_poly(g.delete_vertex(u), reg)
    for v in g.neighbors(u):
        w = MultiPoly.var(reg, reg.find("w", g.edge_between(u, v)), 2)
        rhs = rhs - w * matching_poly(g.delete_vertices([u, v]), reg)
    assert matching_poly(g, reg) == rhs


@given(small_graphs())
def test_derivative_deletes_vertex(g):
    reg = matching_registry(g)
    mu = matching_poly(g, reg)
    for v in g.vertices:
        assert mu.derivative(reg.find("x", v)) == matching_poly(g.delete_vertex(v), reg)


@given(small_graphs(max_n=4), small_graphs(max_n=4))
def test_multiplicative_over_disjoint_union(g, h):
    u = disjoint_union(g, h)
    assert matching_poly_univariate(u) == matching_poly_univariate(g) * matching_poly_univariate(h)


def test_heilmann_lieb_unit_weights():
    g = fig1_graph()
    hl = heilmann_lieb_poly(g)
    xs = [Fraction(1, 2), 3, -2, 5]
    # sum over matchings of (-1)^|M| prod x_i x_j, counted by hand
    edges = list(g.edges.values())
    want = 1 - sum(xs[a - 1] * xs[b - 1] for a, b in edges) + xs[0] * xs[1] * xs[2] * xs[3] * 2
    assert hl.evaluate(xs) == want


def test_path_tree_eta_fused_matches_tree():
    g = fig1_graph()
    reg = matching_registry(g)
    for u in g.vertices:
        assert eta_path_tree(g, u, reg) == eta(path_tree(g, u), reg)


@given(small_graphs(max_n=5))
def test_path_tree_divisibility(g):
    reg = matching_registry(g)
    u = g.vertices[-1]
    q = path_tree_quotient(g, u, reg)
    assert q == expand_factors(path_tree_quotient_factors(g, u, reg), reg)
    comp = next(c for c in g.components() if u in c)
    assert q * matching_poly(g.induced_subgraph(comp), reg) == eta_path_tree(g, u, reg)


def test_numeric_eta_matches_symbolic():
    g = Graph.build(5, [(1, 2), (2, 3), (1, 3), (3, 4), (1, 4), (4, 5), (2, 5)])
    reg = matching_registry(g)
    rng = np.random.default_rng(3)
    x = {v: Fraction(int(rng.integers(-9, 10)), 4) for v in g.vertices}
    w = {e: Fraction(int(rng.integers(-9, 10)), 3) for e in g.edges}
    point = [x[v.origin] if v.kind == "x" else w[v.origin] for v in reg.vars]
    assert eta_path_tree_value(g, 1, x, w) == eta_path_tree(g, 1, reg).evaluate(point)
    mu = matching_poly(g, reg).evaluate(point)
    assert eta_path_tree_value(g, 1, x, w) == mu * evaluate_factors(path_tree_quotient_factors(g, 1, reg), point)


def test_numeric_eta_with_zero_vertex_weight():
    g = cycle_graph(4)
    reg = matching_registry(g)
    x = {1: 0, 2: 0, 3: 1, 4: 2}
    w = {e: 1 for e in g.edges}
    point = [x[v.origin] if v.kind == "x" else w[v.origin] for v in reg.vars]
    assert eta_path_tree_value(g, 1, x, w) == eta_path_tree(g, 1, reg).evaluate(point)


def test_wagner_matching_activities_on_regular_graph():
    # on a 2-regular graph every vertex contributes one spare factor of x_v
    g = cycle_graph(5)
    reg = matching_registry(g)
    wp = wagner_poly(g, matching_activities(g), reg)
    x = [MultiPoly.var(reg, reg.find("x", v)) for v in g.vertices]
    prod = x[0] * x[1] * x[2] * x[3] * x[4]
    assert wp == prod * matching_poly(g, reg)


@given(small_graphs(max_n=4))
def test_wagner_edge_recurrence(g):
    acts = random_activities(g, np.random.default_rng(g.m))
    reg = matching_registry(g)
    assert wagner_poly(g, acts, reg) == wagner_by_edge_recurrence(g, acts, reg)


def test_key_polynomial():
    assert key_polynomial([1, 2, 3]) == UniPoly([1, 4, 3])
