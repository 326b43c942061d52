"""Weightings, random signings and expected determinants.

Every expectation here is an exact average over an explicit enumeration of
the weighting space. Numeric characteristic polynomials go through the
batched integer determinant kernel: each weighting is evaluated at ``n + 1``
integer abscissae and the average is interpolated exactly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, lcm
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .graphs import Graph, complete_graph, iter_matchings
from .hyperbolicity import SampleReport, hyperbolicity_sample_test
from .matchpoly import TheoremViolation, matching_poly_univariate
from .pencils import det_rational, symbolic_det
from .polycore import MultiPoly, Number, UniPoly, Var, VarRegistry, as_rational, real_root_total

ENUMERATION_BOUND = 2**20
CHUNK = 1 << 15


class EnumerationBoundExceeded(ValueError):
    pass


def weight_set(values) -> tuple[Number, ...]:
    """Validate a finite weight set: nonempty, distinct, exact rationals."""
    out = tuple(as_rational(v) for v in values)
    if not out:
        raise ValueError("weight set must be nonempty")
    if len(set(out)) != len(out):
        raise ValueError("weights must be distinct")
    return out


def pairs(n: int) -> list[tuple[int, int]]:
    """Index pairs ``i < j`` in lexicographic order."""
    return list(itertools.combinations(range(n), 2))


def _square(m: Sequence[Sequence]) -> int:
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    return n


def _is_sym(m) -> bool:
    n = len(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i))


def apply_weighting(a: Sequence[Sequence], w, diagonal: bool = True) -> list[list]:
    """Weighted copy of the symmetric matrix ``a``.

    ``w`` maps pairs ``(i, j)``, ``i < j``, to weights, or lists them in
    :func:`pairs` order. Off-diagonal entries are multiplied by their weight;
    with ``diagonal`` the diagonal becomes ``sum_{k<=i} a_ik + sum_{k>i} w_ik^2 a_ik``
    and otherwise it is left alone (a plain signing). Works for numbers and
    for :class:`MultiPoly` entries alike.
    """
    n = _square(a)
    if not _is_sym(a):
        raise ValueError("matrix must be symmetric")
    ps = pairs(n)
    if not isinstance(w, Mapping):
        w = list(w)
        if len(w) != len(ps):
            raise ValueError(f"need {len(ps)} weights for a {n}x{n} matrix, got {len(w)}")
        w = dict(zip(ps, w))
    elif set(w) != set(ps):
        raise ValueError("weight keys must be exactly the pairs i < j")
    out = [[a[i][j] for j in range(n)] for i in range(n)]
    for (i, j), wij in w.items():
        out[i][j] = out[j][i] = a[i][j] * wij
    if diagonal:
        for i in range(n):
            d = a[i][0] * 0
            for k in range(i + 1):
                d = d + a[i][k]
            for k in range(i + 1, n):
                d = d + a[i][k] * (w[(i, k)] * w[(i, k)])
            out[i][i] = d
    return out


# --- numeric expected characteristic polynomials -----------------------------------


def interpolate(xs: Sequence[int], ys: Sequence[Number]) -> UniPoly:
    """Lagrange interpolation through integer abscissae, exactly."""
    out = UniPoly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        basis = UniPoly([1])
        den = 1
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * UniPoly([-xj, 1])
                den *= xi - xj
        out = out + basis * (Fraction(yi) / den)
    return out


def char_poly(m: Sequence[Sequence[Number]]) -> UniPoly:
    """``det(tI - m)`` by exact evaluation and interpolation."""
    n = _square(m)
    xs = list(range(n + 1))
    ys = [det_rational([[(t if i == j else 0) - as_rational(m[i][j]) for j in range(n)] for i in range(n)]) for t in xs]
    return interpolate(xs, ys)


def _space_size(n: int, w: Sequence) -> int:
    return len(w) ** comb(n, 2)


def expected_char_poly(
    a: Sequence[Sequence[Number]],
    weights,
    *,
    diagonal_adjustment: bool = False,
    bound: int = ENUMERATION_BOUND,
    method: str = "kernel",
    check_real: bool = True,
) -> UniPoly:
    """Exact average of ``det(tI - A^w)`` over all weightings ``w`` in ``W^(n choose 2)``.

    Pairs with ``a_ij = 0`` do not change ``A^w``, so only the support is
    enumerated; the average is the same. ``method="exact"`` uses rational
    determinants one weighting at a time instead of the batched kernel.
    """
    n = _square(a)
    a = [[as_rational(c) for c in row] for row in a]
    if not _is_sym(a):
        raise ValueError("matrix must be symmetric")
    w = weight_set(weights)
    if _space_size(n, w) > bound:
        raise EnumerationBoundExceeded(f"{len(w)}^{comb(n, 2)} weightings exceed the bound {bound}")
    support = [p for p in pairs(n) if a[p[0]][p[1]]]
    if method == "exact":
        out = _expected_exact(a, w, support, diagonal_adjustment)
    elif method == "kernel":
        out = _expected_kernel(a, w, support, diagonal_adjustment)
    else:
        raise ValueError(f"unknown method {method!r}")
    if check_real and out.degree() > 0 and real_root_total(out) < out.degree():
        raise TheoremViolation("expected characteristic polynomial is not real-rooted")
    return out


def _full_weights(n: int, support, combo) -> dict:
    full = {p: 1 for p in pairs(n)}
    full.update(zip(support, combo))
    return full


def _expected_exact(a, w, support, diagonal: bool) -> UniPoly:
    n = len(a)
    total = UniPoly()
    count = 0
    for combo in itertools.product(w, repeat=len(support)):
        total = total + char_poly(apply_weighting(a, _full_weights(n, support, combo), diagonal))
        count += 1
    return total * Fraction(1, count)


def _expected_kernel(a, w, support, diagonal: bool) -> UniPoly:
    n = len(a)
    if n == 0:
        return UniPoly([1])
    # common scale D: entries of D * A^w are integers for every weighting
    wden = lcm(*(Fraction(x).denominator for x in w))
    aden = lcm(*(Fraction(c).denominator for row in a for c in row))
    scale = aden * wden * wden
    a_int = np.array([[int(c * aden) for c in row] for row in a], dtype=object)
    w_int = [int(Fraction(x) * wden) for x in w]  # w * wden
    m = len(support)
    xs = list(range(n + 1))
    sums = [0] * len(xs)
    count = len(w) ** m
    if max(abs(x) for x in w_int) * max(1, int(np.abs(a_int).max())) * scale > 2**40:
        return _expected_exact(a, w, support, diagonal)
    base = (a_int * scale // aden).astype(np.int64)
    wi = np.array(w_int, dtype=np.int64)
    for start in range(0, count, CHUNK):
        idx = np.arange(start, min(count, start + CHUNK), dtype=np.int64)
        digits = np.empty((idx.size, m), dtype=np.int64)
        rest = idx.copy()
        for p in range(m - 1, -1, -1):
            digits[:, p] = rest % len(w)
            rest //= len(w)
        wv = wi[digits]  # (batch, m), each w * wden
        mats = np.broadcast_to(base, (idx.size, n, n)).copy()
        for p, (i, j) in enumerate(support):
            off = wv[:, p] * (int(a[i][j] * aden) * wden)
            mats[:, i, j] = off
            mats[:, j, i] = off
        if diagonal:
            for i in range(n):
                d = np.full(idx.size, sum(int(a[i][k] * aden) for k in range(i + 1)) * wden * wden, dtype=np.int64)
                for k in range(i + 1, n):
                    if a[i][k]:
                        p = support.index((i, k))
                        d += wv[:, p] * wv[:, p] * int(a[i][k] * aden)
                    # pairs outside the support contribute w^2 * 0
                mats[:, i, i] = d
        for xi, t in enumerate(xs):
            shifted = -mats
            shifted[:, np.arange(n), np.arange(n)] += t * scale
            sums[xi] += kernels.batch_det_sum(shifted)
    # sums[x] = count * scale^n * E det(xI - A^w)
    ys = [Fraction(s, count * scale**n) for s in sums]
    return interpolate(xs, ys)


def adjacency_matrix(g: Graph) -> list[list[int]]:
    pos = {v: i for i, v in enumerate(g.vertices)}
    out = [[0] * g.n for _ in range(g.n)]
    for a, b in g.edges.values():
        out[pos[a]][pos[b]] = out[pos[b]][pos[a]] = 1
    return out


def godsil_gutman(g: Graph, method: str = "kernel") -> tuple[UniPoly, UniPoly]:
    """``(E det(tI - A^s), mu(G, t))`` over uniform signings of the edges."""
    return expected_char_poly(adjacency_matrix(g), (1, -1), method=method), matching_poly_univariate(g)


def signing_char_polys(g: Graph) -> list[UniPoly]:
    """``det(tI - A^s)`` for every individual signing ``s`` of the edges."""
    a = adjacency_matrix(g)
    n = g.n
    support = [p for p in pairs(n) if a[p[0]][p[1]]]
    return [
        char_poly(apply_weighting(a, _full_weights(n, support, combo), diagonal=False))
        for combo in itertools.product((1, -1), repeat=len(support))
    ]


# --- symbolic signings -------------------------------------------------------------


def conv_registry(n: int) -> VarRegistry:
    """``x_ij`` then ``y_ij`` for ``i <= j`` (1-based names)."""
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    return VarRegistry(
        [Var("x", (i, j), f"x_{i + 1}{j + 1}") for i, j in idx] + [Var("y", (i, j), f"y_{i + 1}{j + 1}") for i, j in idx]
    )


def symbolic_matrix(registry: VarRegistry, kind: str, n: int) -> list[list[MultiPoly]]:
    def var(i, j):
        return MultiPoly.var(registry, registry.find(kind, (min(i, j), max(i, j))))

    return [[var(i, j) for j in range(n)] for i in range(n)]


def symbolic_pair(n: int) -> tuple[VarRegistry, list[list[MultiPoly]], list[list[MultiPoly]]]:
    reg = conv_registry(n)
    return reg, symbolic_matrix(reg, "x", n), symbolic_matrix(reg, "y", n)


def _lift_matrix(m, reg: VarRegistry) -> list[list[MultiPoly]]:
    return [[c if isinstance(c, MultiPoly) else MultiPoly.const(reg, c) for c in row] for row in m]


def _registry_of(*mats) -> VarRegistry:
    for m in mats:
        for row in m:
            for c in row:
                if isinstance(c, MultiPoly):
                    return c.registry
    return VarRegistry([])


def weighted_expectation(x, y, weights, *, diagonal: bool, bound: int = ENUMERATION_BOUND) -> MultiPoly:
    """``E det(X^w1 + Y^w2)`` over independent ``w1, w2`` in ``W^(n choose 2)``."""
    n = _square(x)
    if _square(y) != n:
        raise ValueError("X and Y must have the same size")
    w = weight_set(weights)
    if _space_size(n, w) ** 2 > bound:
        raise EnumerationBoundExceeded(f"{len(w)}^{2 * comb(n, 2)} weighting pairs exceed the bound {bound}")
    reg = _registry_of(x, y)
    x, y = _lift_matrix(x, reg), _lift_matrix(y, reg)
    ps = pairs(n)
    # weightings of each side are enumerated once and reused across the product
    xs = [apply_weighting(x, combo, diagonal) for combo in itertools.product(w, repeat=len(ps))]
    ys = [apply_weighting(y, combo, diagonal) for combo in itertools.product(w, repeat=len(ps))]
    total = MultiPoly.zero(reg)
    for xw in xs:
        for yw in ys:
            total = total + symbolic_det([[xw[i][j] + yw[i][j] for j in range(n)] for i in range(n)], reg)
    return total * Fraction(1, len(xs) * len(ys))


def signing_expectation(x=None, y=None, *, n: int | None = None, bound: int = ENUMERATION_BOUND) -> MultiPoly:
    """``E det(X^s1 + Y^s2)`` over independent signings, without diagonal adjustment.

    With ``n`` alone the matrices are fully symbolic (see :func:`symbolic_pair`).
    """
    if x is None:
        if n is None:
            raise ValueError("pass matrices or n")
        _, x, y = symbolic_pair(n)
    return weighted_expectation(x, y, (1, -1), diagonal=False, bound=bound)


def boxplus_closed_form(n: int, registry: VarRegistry | None = None) -> MultiPoly:
    """Sum over matchings ``M`` of ``K_n`` of ``(-1)^|M| prod_{i free}(x_ii + y_ii) prod_{jk in M}(x_jk^2 + y_jk^2)``."""
    if n > 6:
        raise ValueError("closed form limited to n <= 6")
    reg = registry or conv_registry(n)
    x, y = symbolic_matrix(reg, "x", n), symbolic_matrix(reg, "y", n)
    kn = complete_graph(n)
    pos = {v: i for i, v in enumerate(kn.vertices)}
    total = MultiPoly.zero(reg)
    for m in iter_matchings(kn):
        term = MultiPoly.const(reg, (-1) ** len(m))
        covered = set()
        for e in m:
            j, k = (pos[v] for v in kn.edges[e])
            covered |= {j, k}
            term = term * (x[j][k] * x[j][k] + y[j][k] * y[j][k])
        for i in range(n):
            if i not in covered:
                term = term * (x[i][i] + y[i][i])
        total = total + term
    return total


def perfect_matching_sum(s: frozenset, m: Sequence[Sequence[MultiPoly]], one: MultiPoly) -> MultiPoly:
    """``sum_M prod_{jk in M} m_jk^2`` over perfect matchings of the complete graph on ``s``."""
    if not s:
        return one
    if len(s) % 2:
        return one * 0
    first = min(s)
    total = one * 0
    for j in sorted(s - {first}):
        total = total + m[first][j] * m[first][j] * perfect_matching_sum(s - {first, j}, m, one)
    return total


def boxplus_subset_form(n: int, registry: VarRegistry | None = None) -> MultiPoly:
    """Sum over even ``S`` of ``(-1)^(|S|/2) prod_{i not in S}(x_ii + y_ii)`` times the
    split sum of unsigned perfect-matching polynomials of ``X[S1]`` and ``Y[S2]``."""
    reg = registry or conv_registry(n)
    x, y = symbolic_matrix(reg, "x", n), symbolic_matrix(reg, "y", n)
    one = MultiPoly.const(reg, 1)
    total = MultiPoly.zero(reg)
    for size in range(0, n + 1, 2):
        for s in itertools.combinations(range(n), size):
            split = MultiPoly.zero(reg)
            for r in range(size + 1):
                for s1 in itertools.combinations(s, r):
                    s2 = frozenset(s) - set(s1)
                    split = split + perfect_matching_sum(frozenset(s1), x, one) * perfect_matching_sum(s2, y, one)
            diag = one
            for i in range(n):
                if i not in s:
                    diag = diag * (x[i][i] + y[i][i])
            total = total + diag * split * (-1) ** (size // 2)
    return total


# --- the complete graph with two signings --------------------------------------------


def kn_double_signing(n: int, method: str = "kernel") -> UniPoly:
    """``E det(tI + A^s1 + B^s2)`` for ``A = B`` the adjacency of ``K_n``, by enumeration."""
    if n > 5:
        raise ValueError("n <= 5")
    if n == 0:
        return UniPoly([1])
    ps = pairs(n)
    m = len(ps)
    if method == "exact":
        total = UniPoly()
        count = 0
        for s1 in itertools.product((1, -1), repeat=m):
            for s2 in itertools.product((1, -1), repeat=m):
                mat = [[0] * n for _ in range(n)]
                for (i, j), u, v in zip(ps, s1, s2):
                    mat[i][j] = mat[j][i] = -(u + v)
                total = total + char_poly(mat)
                count += 1
        return total * Fraction(1, count)
    count = 4**m
    xs = list(range(n + 1))
    sums = [0] * len(xs)
    for start in range(0, count, CHUNK):
        idx = np.arange(start, min(count, start + CHUNK), dtype=np.int64)
        # two sign bits per pair: bit 2p for s1, bit 2p+1 for s2
        mats = np.zeros((idx.size, n, n), dtype=np.int64)
        for p, (i, j) in enumerate(ps):
            s1 = 1 - 2 * ((idx >> (2 * p)) & 1)
            s2 = 1 - 2 * ((idx >> (2 * p + 1)) & 1)
            mats[:, i, j] = s1 + s2
            mats[:, j, i] = s1 + s2
        for xi, t in enumerate(xs):
            shifted = mats.copy()
            shifted[:, np.arange(n), np.arange(n)] += t
            sums[xi] += kernels.batch_det_sum(shifted)
    return interpolate(xs, [Fraction(s, count) for s in sums])


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def kn_formula(n: int, base: Number) -> UniPoly:
    """``sum_k t^(n-2k) (-1)^k C(n,2k) (2k-1)!! base^k``."""
    coeffs = [0] * (n + 1)
    for k in range(n // 2 + 1):
        coeffs[n - 2 * k] = (-1) ** k * comb(n, 2 * k) * double_factorial(2 * k - 1) * Fraction(base) ** k
    return UniPoly(coeffs)


def kn_split_sum(n: int) -> UniPoly:
    """``sum_k t^(n-2k) (-1)^k C(n,2k) sum_{i+j=k} C(2k,2i) (2i-1)!! (2j-1)!!``."""
    coeffs = [0] * (n + 1)
    for k in range(n // 2 + 1):
        inner = sum(comb(2 * k, 2 * i) * double_factorial(2 * i - 1) * double_factorial(2 * (k - i) - 1) for i in range(k + 1))
        coeffs[n - 2 * k] = (-1) ** k * comb(n, 2 * k) * inner
    return UniPoly(coeffs)


def kn_three_halves(n: int) -> UniPoly:
    return kn_formula(n, Fraction(3, 2))


# --- hyperbolicity of the convolution ------------------------------------------------


def convolution_poly(n: int, weights, registry: VarRegistry | None = None) -> MultiPoly:
    """Symbolic ``det(X) conv_W det(Y)``: weighted expectation with the diagonal rule."""
    if n > 3:
        raise ValueError("symbolic convolution limited to n <= 3")
    reg = registry or conv_registry(n)
    return weighted_expectation(symbolic_matrix(reg, "x", n), symbolic_matrix(reg, "y", n), weights, diagonal=True)


def identity_direction(registry: VarRegistry) -> tuple[int, ...]:
    """``I ⊕ 0``: one on the diagonal ``x_ii``, zero elsewhere."""
    return tuple(1 if v.kind == "x" and v.origin[0] == v.origin[1] else 0 for v in registry.vars)


def conv_hyperbolicity_sample(n: int, weights, trials: int = 50, seed: int = 0) -> SampleReport:
    reg = conv_registry(n)
    h = convolution_poly(n, weights, reg)
    return hyperbolicity_sample_test(h, identity_direction(reg), trials, seed)
