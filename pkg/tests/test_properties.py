"""Randomised invariants of the polynomial core."""

from fractions import Fraction

from hypothesis import assume, given, strategies as st

from spectracert.polycore import (
    MultiPoly,
    UniPoly,
    Var,
    VarRegistry,
    exact_divide,
    isolate_real_roots,
    real_root_count,
    real_root_total,
    square_free_decomposition,
)

REG = VarRegistry([Var("x", i, f"v{i}") for i in range(3)])

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
exponents = st.tuples(*[st.integers(0, 3)] * 3)


@st.composite
def polys(draw, max_terms: int = 5):
    terms = draw(st.lists(st.tuples(exponents, rationals), max_size=max_terms))
    out = MultiPoly.zero(REG)
    for ex, c in terms:
        out = out + MultiPoly(REG, {REG.pack(ex): 1}).scale(c) if c else out
    return out


points = st.lists(rationals, min_size=3, max_size=3)


@given(polys())
def test_json_roundtrip(p):
    assert MultiPoly.from_json(p.to_json()) == p


@given(polys(), points, points, rationals)
def test_restrict_line_matches_evaluate(p, e, x, t):
    u = p.restrict_line(e, x)
    assert u(t) == p.evaluate([t * a - b for a, b in zip(e, x)])


@given(polys(), polys(), points)
def test_product_evaluates(p, q, pt):
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)


@given(polys(4), polys(4))
def test_exact_divide_of_product(p, q):
    assume(not q.is_zero())
    assert exact_divide(p * q, q) == p


@given(polys(3), polys(3), points)
def test_derivative_product_rule(p, q, pt):
    v = REG.vars[1]
    assert (p * q).derivative(v) == p.derivative(v) * q + p * q.derivative(v)


root_lists = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=1, max_size=6)


@given(root_lists, st.integers(0, 2))
def test_real_roots_with_multiplicity(roots, complex_pairs):
    u = UniPoly.from_roots(roots)
    for k in range(complex_pairs):
        u = u * UniPoly([k + 1, 0, 1])
    assert real_root_total(u) == len(roots)
    assert real_root_count(u) == len(set(roots))
    iso = isolate_real_roots(u)
    assert sum(r.multiplicity for r in iso) == len(roots)
    for r, want in zip(iso, sorted(set(roots))):
        assert r.lo <= want <= r.hi


@given(root_lists)
def test_square_free_parts_multiply_back(roots):
    u = UniPoly.from_roots(roots) * Fraction(3, 2)
    prod = UniPoly([1])
    for f, m in square_free_decomposition(u):
        prod = prod * f**m
    assert prod.monic() == u.monic()
