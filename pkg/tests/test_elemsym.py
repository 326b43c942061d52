from fractions import Fraction
from math import comb

import pytest

from spectracert.elemsym import (
    c_value,
    elem_M,
    elem_M_recursion,
    elem_M_tree,
    elem_poly,
    elem_registry,
    elemsym_certificate,
    elemsym_pencil,
)
from spectracert.pencils import pencil_symbolic_det, verify_certificate
from spectracert.polycore import exact_divide


def test_c_values():
    assert [c_value(k) for k in range(6)] == [1, 1, 2, Fraction(3, 2), Fraction(8, 3), Fraction(15, 8)]
    with pytest.raises(ValueError):
        c_value(-1)


@pytest.mark.parametrize("n, k", [(4, 0), (4, 2), (5, 3), (3, 3)])
def test_elem_poly_terms(n, k):
    reg = elem_registry(n)
    e = elem_poly(range(1, n + 1), k, reg)
    assert len(e) == comb(n, k)
    assert e.evaluate([1] * n) == comb(n, k)


@pytest.mark.parametrize("n, k", [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)])
def test_tree_routes_agree(n, k):
    fused = elem_M_tree(n, k)
    assert fused == elem_M_tree(n, k, method="enumeration")
    assert fused == elem_M_recursion(n, k)


@pytest.mark.parametrize("n, k", [(3, 2), (4, 3), (5, 2)])
def test_quotient_is_polynomial(n, k):
    reg = elem_registry(n)
    assert exact_divide(elem_M(n, k), elem_poly(range(1, n + 1), k, reg)) is not None


def test_pencil_determinant_matches():
    p = elemsym_pencil(3, 2)
    assert pencil_symbolic_det(p) == elem_M(3, 2)


def test_k_equals_one_is_trivial():
    cert = elemsym_certificate(4, 1)
    assert cert.pencil.dim == 1
    assert cert.q.degree() == 0


@pytest.mark.parametrize("n, k", [(3, 2), (4, 2), (4, 3)])
def test_certificate_verifies(n, k):
    rep = verify_certificate(elemsym_certificate(n, k), trials=20, inclusion_samples=20)
    assert rep.passed, rep.to_json()


def test_range_checks():
    with pytest.raises(ValueError):
        elem_M(3, 4)
    with pytest.raises(ValueError):
        elem_poly([1, 2], 3, elem_registry(2))
