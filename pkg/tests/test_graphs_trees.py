import json

import pytest

from spectracert.graphs import (
    Graph,
    GraphError,
    SizeBoundExceeded,
    complete_graph,
    count_perfect_matchings,
    cycle_graph,
    enumerate_independent_sets,
    enumerate_matchings,
    fig1_graph,
    graph_atlas,
    graph_from_json,
    graph_to_json,
    is_claw_free,
    is_isomorphic,
    line_graph,
    octahedron,
    path_graph,
    simplicial_cliques,
    star_graph,
    trees_up_to,
)
from spectracert.trees import (
    BlockTree,
    LabeledTree,
    blocks_of,
    clique_tree,
    path_tree,
    tree_from_line_graph,
    truncated_path_tree,
)


def test_rejects_loops_and_multi_edges():
    with pytest.raises(GraphError):
        Graph.build(2, [(1, 1)])
    with pytest.raises(GraphError):
        Graph.build(2, [(1, 2), (2, 1)])
    with pytest.raises(GraphError):
        Graph.build(2, [(1, 3)])


def test_deletion_keeps_universe():
    g = fig1_graph()
    h = g.delete_vertex(3)
    assert h.vertices == (1, 2, 4)
    assert sorted(h.edges) == [0, 4]
    assert h.universe == g.universe
    assert g.delete_closed_neighborhood(4).vertices == (2,)


def test_json_roundtrip_with_labels():
    g = octahedron()
    data = json.loads(json.dumps(graph_to_json(g)))
    h = graph_from_json(data)
    assert h.n == 6 and h.m == 12
    assert is_isomorphic(g, h)
    assert [h.vertex_label(v) for v in h.vertices] == list("abcdef")


def test_atlas_counts():
    # networkx's atlas also contains the empty graph, which we skip
    assert len(graph_atlas(5)) == 52
    assert len(graph_atlas(6, connected=True)) == 143
    # unlabeled trees on 1..7 vertices: 1, 1, 1, 2, 3, 6, 11
    assert len(trees_up_to(7)) == 25
    with pytest.raises(SizeBoundExceeded):
        graph_atlas(8)


def test_enumeration_counts():
    assert len(enumerate_matchings(complete_graph(4))) == 10
    assert count_perfect_matchings(complete_graph(6)) == 15
    assert len(enumerate_independent_sets(cycle_graph(5))) == 11
    assert len(enumerate_independent_sets(octahedron())) == 10


def test_claw_free_and_simplicial():
    assert not is_claw_free(star_graph(3))
    assert is_claw_free(line_graph(complete_graph(4)))
    assert is_claw_free(path_graph(4))
    assert simplicial_cliques(path_graph(3)) == [(1,), (1, 2), (2, 3), (3,)]


def test_path_tree_sizes():
    g = fig1_graph()
    assert [path_tree(g, u).n for u in g.vertices] == [10, 11, 10, 11]
    assert path_tree(complete_graph(4), 1).n == 16
    assert path_tree(complete_graph(6), 1).n == 326


def test_path_tree_of_tree_is_isomorphic():
    g = Graph.build(5, [(1, 2), (2, 3), (2, 4), (4, 5)])
    t = path_tree(g, 3)
    assert is_isomorphic(t.graph, g)
    assert t.vertex_map[t.root] == 3


def test_labeled_tree_json_and_subtree():
    t = path_tree(cycle_graph(4), 1)
    back = LabeledTree.from_json(json.loads(t.dumps()))
    assert back.graph == t.graph and back.vertex_map == t.vertex_map
    kid = t.children(t.root)[0]
    sub = t.subtree(kid)
    assert sub.root == kid and sub.n == t.n // 2


def test_truncated_path_tree_sizes():
    # paths in K_n from the last vertex with at most k vertices
    assert truncated_path_tree(4, 1).n == 1
    assert truncated_path_tree(4, 2).n == 4
    assert truncated_path_tree(4, 3).n == 10
    assert truncated_path_tree(4, 4).n == path_tree(complete_graph(4), 4).n


def test_blocks_and_clique_tree():
    g = fig1_graph()
    assert sorted(map(len, blocks_of(g))) == [4]
    b = clique_tree(Graph.build(4, [(1, 2), (2, 3), (3, 4)]), (1, 2))
    assert isinstance(b, BlockTree)
    assert BlockTree.from_json(json.loads(json.dumps(b.to_json()))).phi == b.phi


def test_line_graph_inversion():
    t = Graph.build(6, [(1, 2), (2, 3), (2, 4), (4, 5), (4, 6)])
    lg = line_graph(t)
    inv = tree_from_line_graph(lg)
    assert is_isomorphic(inv.graph, t)
    assert is_isomorphic(line_graph(inv.graph), lg)


def test_clique_tree_not_claw_free():
    with pytest.raises(GraphError):
        clique_tree(star_graph(3), (1,))
