import json
from fractions import Fraction

import pytest
from conftest import small_trees
from hypothesis import given

from spectracert.graphs import Graph, complete_graph, cycle_graph, fig1_graph, path_graph
from spectracert.matchpoly import matching_poly, matching_registry
from spectracert.pencils import (
    Certificate,
    Pencil,
    bareiss_det,
    det_rational,
    independence_certificate,
    is_positive_definite,
    leading_minors,
    matching_certificate,
    pencil_eval_det,
    pencil_symbolic_det,
    tamper_wrong_q,
    tamper_zero_direction,
    tamper_zero_entry,
    tree_pencil,
    verify_certificate,
)
from spectracert.polycore import LinearForm, Var, VarRegistry
from spectracert.trees import LabeledTree


def test_bareiss_frozen():
    assert bareiss_det([[3, -1, 4, 1], [5, 9, -2, 6], [5, 3, 5, -8], [9, 7, 9, 3]]) == 1620
    assert bareiss_det([[0, 1], [1, 0]]) == -1
    assert bareiss_det([[1, 2], [2, 4]]) == 0


def test_rational_det_and_minors():
    m = [[Fraction(1, 2), 2, 0], [2, Fraction(-1, 3), 1], [0, 1, 4]]
    assert det_rational(m) == Fraction(-103, 6)
    assert leading_minors(m) == [Fraction(1, 2), Fraction(-25, 6), Fraction(-103, 6)]
    assert not is_positive_definite(m)
    assert is_positive_definite([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])


def test_pencil_validation():
    reg = VarRegistry([Var("x", 1), Var("x", 2)])
    a, b = (LinearForm.of(v) for v in reg.vars)
    with pytest.raises(ValueError):
        Pencil(reg, [[a, b], [a, b]])
    with pytest.raises(ValueError):
        Pencil(reg, [[a + LinearForm({}, 1)]])
    p = Pencil(reg, [[a, b], [b, a]])
    assert Pencil.from_json(json.loads(json.dumps(p.to_json())), reg) == p
    assert pencil_eval_det(p, [3, 1]) == 8


def _tree_labeled(t: Graph) -> LabeledTree:
    return LabeledTree(t, {v: v for v in t.vertices}, {e: e for e in t.edges}, t.vertices[0])


@given(small_trees(max_n=7))
def test_tree_pencil_det_is_matching_poly(t):
    reg = matching_registry(t)
    p = tree_pencil(_tree_labeled(t), reg)
    assert pencil_symbolic_det(p) == matching_poly(t, reg)


@pytest.mark.parametrize("g", [fig1_graph(), cycle_graph(4), complete_graph(4), path_graph(3)])
def test_matching_certificate_verifies(g):
    cert = matching_certificate(g)
    rep = verify_certificate(cert, trials=20, inclusion_samples=20)
    assert rep.passed, rep.to_json()
    back = Certificate.loads(cert.dumps())
    assert back.dumps() == cert.dumps()


def test_quotient_routes_agree():
    g = fig1_graph()
    assert matching_certificate(g, 2, "divide").q == matching_certificate(g, 2, "factors").q


def test_disconnected_matching_certificate():
    g = Graph.build(5, [(1, 2), (3, 4), (4, 5)])
    assert verify_certificate(matching_certificate(g), trials=10, inclusion_samples=10).passed


def test_independence_certificate_verifies():
    g = Graph.build(5, [(1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (3, 5)])
    cert = independence_certificate(g, (1, 2, 3))
    assert cert.provenance["padding"] >= 0
    assert verify_certificate(cert, trials=20, inclusion_samples=20).passed


def test_tampering_is_detected():
    cert = matching_certificate(cycle_graph(4))
    bad = verify_certificate(tamper_zero_entry(cert), trials=10, inclusion_samples=5)
    assert not bad.passed
    assert bad.failed()[0].name == "identity" and "point" in bad.failed()[0].witness
    bad = verify_certificate(tamper_wrong_q(cert), trials=10, inclusion_samples=5)
    assert "identity" in [c.name for c in bad.failed()]
    bad = verify_certificate(tamper_zero_direction(cert), trials=10, inclusion_samples=5)
    names = [c.name for c in bad.failed()]
    assert "definite_at_direction" in names and "cone_inclusion" in names


def test_certificate_rejects_bad_version():
    data = matching_certificate(path_graph(2)).to_json()
    data["format_version"] = 2
    with pytest.raises(ValueError):
        Certificate.from_json(data)
