import pytest
from conftest import small_graphs
from hypothesis import given

from spectracert.graphs import Graph, GraphError, cycle_graph, fig1_graph, line_graph, octahedron, path_graph, star_graph
from spectracert.indeppoly import (
    block_tree_independence,
    clique_tree_quotient,
    independence_poly,
    independence_poly_homogeneous,
    independence_poly_homogeneous_enum,
    independence_registry,
    line_graph_defect,
    line_tree_matching,
    weighted_independence_univariate,
)
from spectracert.matchpoly import matching_poly_univariate
from spectracert.polycore import MultiPoly, UniPoly
from spectracert.trees import clique_tree, tree_from_line_graph


@pytest.mark.parametrize(
    "g, coeffs",
    [(octahedron(), [1, 6, 3]), (cycle_graph(5), [1, 5, 5]), (path_graph(4), [1, 4, 3])],
)
def test_univariate_values(g, coeffs):
    assert weighted_independence_univariate(g) == UniPoly(coeffs)


def test_weights_scale_vertices():
    g = path_graph(3)
    assert weighted_independence_univariate(g, {1: 2, 3: 5}) == UniPoly([1, 8, 10])


def test_multivariate_counts_sets():
    g = cycle_graph(4)
    p = independence_poly(g)
    assert len(p) == 7
    assert p.evaluate([1, 1, 1, 1]) == 7


@given(small_graphs(max_n=5))
def test_homogeneous_recursion_matches_enumeration(g):
    reg = independence_registry(g)
    assert independence_poly_homogeneous(g, reg) == independence_poly_homogeneous_enum(g, reg)


@given(small_graphs(max_n=5))
def test_homogeneous_specialises_to_univariate(g):
    # x_v -> 1 and t -> 1 leaves sum_I (-1)^|I|, i.e. I(G, -1)
    h = independence_poly_homogeneous(g)
    assert h.evaluate([1] * len(h.registry)) == weighted_independence_univariate(g)(-1)


def test_line_graph_independence_is_matching():
    # independent sets of L(G) are matchings of G
    for g in (fig1_graph(), cycle_graph(6), path_graph(5)):
        mu = matching_poly_univariate(g)
        ind = weighted_independence_univariate(line_graph(g))
        assert [abs(c) for c in mu.coeffs[::-2]] == list(ind.coeffs)


@pytest.mark.parametrize(
    "g, k",
    [
        (path_graph(4), (1, 2)),
        (cycle_graph(5), (1, 2)),
        (line_graph(fig1_graph()), (0, 1, 2)),
        (Graph.build(5, [(1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (3, 5)]), (1, 2, 3)),
    ],
)
def test_clique_tree_divisibility(g, k):
    reg = independence_registry(g)
    q = clique_tree_quotient(g, k, reg)
    b = clique_tree(g, k)
    num = block_tree_independence(b, reg)
    assert q * independence_poly_homogeneous(g, reg) == num
    tree = tree_from_line_graph(b)
    t = MultiPoly.var(reg, reg.find("t"))
    assert t ** line_graph_defect(b, tree) * line_tree_matching(tree, b, reg) == num


def test_clique_tree_rejections():
    with pytest.raises(GraphError):
        clique_tree_quotient(star_graph(3), (1,))
    with pytest.raises(GraphError):
        clique_tree_quotient(cycle_graph(4), (1, 3))
