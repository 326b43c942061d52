from fractions import Fraction

import pytest

from spectracert.polycore import (
    LinearForm,
    MultiPoly,
    RegistryMismatch,
    Substitution,
    UniPoly,
    Var,
    VarRegistry,
    apply_substitution,
    as_rational,
    exact_divide,
    format_rational,
    isolate_real_roots,
    parse_rational,
    real_root_count,
    real_root_total,
    registry_from_json,
    registry_to_json,
    square_free_decomposition,
    sturm_chain,
)


@pytest.fixture
def reg():
    return VarRegistry([Var("x", 1, "a"), Var("x", 2, "b"), Var("x", 3, "c")])


@pytest.fixture
def abc(reg):
    return [MultiPoly.var(reg, v) for v in reg.vars]


def test_rationals():
    assert as_rational(Fraction(4, 2)) == 2 and type(as_rational(Fraction(4, 2))) is int
    assert parse_rational("-3/6", strict=False) == Fraction(-1, 2)
    with pytest.raises(ValueError):
        parse_rational("2/4")
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert format_rational(Fraction(-7, 3)) == "-7/3"
    assert format_rational(5) == "5"


def test_registry_packing(reg):
    key = reg.pack([2, 0, 5])
    assert reg.unpack(key) == (2, 0, 5)
    assert reg.degree_of(key) == 7
    assert reg.divides(reg.pack([1, 0, 2]), key)
    assert not reg.divides(reg.pack([3, 0, 0]), key)
    # grlex: higher total degree first, then variable 0 dominates
    assert reg.pack([0, 0, 3]) > reg.pack([2, 0, 0]) > reg.pack([1, 1, 0])
    assert registry_from_json(registry_to_json(reg)) == reg


def test_arithmetic(reg, abc):
    a, b, c = abc
    p = (a + b) * (a - b)
    assert p == a * a - b * b
    assert (a + 1) ** 3 == a**3 + 3 * a * a + 3 * a + 1
    assert len(p) == 2 and p.degree() == 2 and p.is_homogeneous()
    assert not (a + 1).is_homogeneous()
    assert (a * b * c).evaluate([2, 3, Fraction(1, 6)]) == 1
    assert (a * a * b).derivative(reg.vars[0]) == 2 * a * b
    other = VarRegistry([Var("y", 0)])
    with pytest.raises(RegistryMismatch):
        a + MultiPoly.var(other, other.vars[0])


def test_str_canonical_order(abc):
    a, b, c = abc
    assert str(c**2 - a * b + 3) == "-a*b + c^2 + 3" or str(c**2 - a * b + 3).startswith("-a*b")


def test_json_roundtrip(abc):
    a, b, c = abc
    p = Fraction(3, 7) * a * b - c**4 + 2
    assert MultiPoly.from_json(p.to_json()) == p


def test_json_rejects_bad_coefficients(abc):
    data = (abc[0] + 1).to_json()
    data["terms"][0]["coeff"] = "2/4"
    with pytest.raises(ValueError):
        MultiPoly.from_json(data)
    data["terms"][0]["coeff"] = "0"
    with pytest.raises(ValueError):
        MultiPoly.from_json(data)


def test_exact_divide(abc):
    a, b, c = abc
    den = a * a - b * c + Fraction(1, 2) * c
    q = a**3 - 2 * b + 7
    assert exact_divide(den * q, den) == q
    assert exact_divide(den * q + a, den) is None
    assert exact_divide(den * q, MultiPoly.const(a.registry, 2)) == den * q * Fraction(1, 2)
    with pytest.raises(ZeroDivisionError):
        exact_divide(q, MultiPoly.zero(a.registry))


def test_exact_divide_term_budget(abc):
    a, b, c = abc
    num = (a + b + c + 1) ** 8
    with pytest.raises(MemoryError):
        exact_divide(num, a + b + c + 1, max_terms=5)


def test_restrict_line_matches_evaluation(abc):
    a, b, c = abc
    p = a * a * b + Fraction(1, 3) * c - 5 * a * b * c
    e = [1, Fraction(1, 2), 2]
    x = [Fraction(-3, 4), 5, 0]
    u = p.restrict_line(e, x)
    for t in (Fraction(0), Fraction(7, 5), Fraction(-2)):
        assert u(t) == p.evaluate([t * ei - xi for ei, xi in zip(e, x)])


def test_collapse(abc, reg):
    a, b, c = abc
    p = a * b - c * c + a
    assert p.collapse(reg.vars[:2], others=2) == UniPoly([0, 1, 1]) + UniPoly([-4])


def test_linear_substitution(reg, abc):
    a, b, c = abc
    x, y, z = reg.vars
    target = VarRegistry([Var("s", 0, "s"), Var("s", 1, "r")])
    s, r = target.vars
    sub = Substitution({x: LinearForm.of(s) + LinearForm.of(r), y: LinearForm.of(s, -1), z: LinearForm({}, 3)})
    img = apply_substitution(a * b + c, sub, target)
    S, R = (MultiPoly.var(target, v) for v in target.vars)
    assert img == -(S + R) * S + 3
    strict = Substitution({x: LinearForm.of(s)}, strict=True)
    with pytest.raises(KeyError):
        apply_substitution(a * b, strict, target)


# --- univariate ---------------------------------------------------------------------


POLY = UniPoly.from_roots([1, 1, 2, Fraction(-1, 3)]) * UniPoly([1, 0, 1])


def test_univariate_frozen_coefficients():
    # (t-1)^2 (t-2) (t+1/3) (t^2+1), expanded independently
    assert POLY == UniPoly([Fraction(-2, 3), Fraction(-1, 3), 3, -4, Fraction(14, 3), Fraction(-11, 3), 1])


def test_square_free_decomposition():
    parts = {m: f for f, m in square_free_decomposition(POLY)}
    assert set(parts) == {1, 2}
    assert parts[2].monic() == UniPoly([-1, 1])
    assert parts[1].degree() == 4


def test_sturm_counts():
    assert real_root_count(POLY) == 3
    assert real_root_total(POLY) == 4
    assert real_root_count(POLY, 0, 1) == 1  # (0, 1] contains 1
    assert real_root_count(POLY, 1, 2) == 1
    assert real_root_count(POLY, float("-inf"), 0) == 1
    assert len(sturm_chain(UniPoly([1, 0, 1]))) >= 2
    assert real_root_count(UniPoly([1, 0, 1])) == 0


def test_isolation_with_multiplicity():
    roots = isolate_real_roots(POLY)
    assert [r.multiplicity for r in roots] == [1, 2, 1]
    assert [round(float(r)) for r in roots] == [0, 1, 2]
    assert abs(float(roots[0]) + 1 / 3) < 1e-9
    for r in roots:
        assert r.exact is not None or r.hi - r.lo <= Fraction(1, 2**32)


def test_isolation_exact_split_points():
    u = UniPoly.from_roots([0, Fraction(1, 2), Fraction(-1, 2), 3])
    roots = isolate_real_roots(u)
    assert len(roots) == 4
    assert all(r.lo <= q <= r.hi for r, q in zip(roots, [Fraction(-1, 2), 0, Fraction(1, 2), 3]))
