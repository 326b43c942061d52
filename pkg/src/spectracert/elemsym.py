"""Determinantal certificates for elementary symmetric polynomials via truncated path trees."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .matchpoly import TheoremViolation, matching_poly
from .pencils import Certificate, Pencil
from .polycore import LinearForm, MultiPoly, Substitution, Var, VarRegistry, apply_substitution, exact_divide
from .trees import LabeledTree, truncated_path_tree


@lru_cache(maxsize=None)
def c_value(k: int) -> Fraction | int:
    """``prod_{j < floor(k/2)} (k - 2j) / (k - 2j - 1)``; 1 for ``k`` in {0, 1}."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = Fraction(1)
    for j in range(k // 2):
        out *= Fraction(k - 2 * j, k - 2 * j - 1)
    return out.numerator if out.denominator == 1 else out


def elem_registry(n: int) -> VarRegistry:
    return VarRegistry(Var("x", i, f"x_{i}") for i in range(1, n + 1))


def elem_poly(s: Iterable[int], k: int, registry: VarRegistry) -> MultiPoly:
    s = sorted(s)
    if not 0 <= k <= len(s):
        raise ValueError(f"need 0 <= k <= |S|, got k={k}, |S|={len(s)}")
    units = [registry.units[registry.index(registry.find("x", i))] for i in s]
    return MultiPoly(registry, {sum(c): 1 for c in itertools.combinations(units, k)} if k else {0: 1})


def node_label(path: tuple[int, ...], n: int, k: int) -> tuple[frozenset, int, int]:
    """``(S, k', i)`` carried by the tree node naming ``path``."""
    s = frozenset(range(1, n + 1)) - set(path[:-1])
    return s, k - (len(path) - 1), path[-1]


def node_form(s: frozenset, kk: int, i: int) -> LinearForm:
    """Image of the vertex variable of a node carrying ``(S, k', i)``."""
    if kk <= 1:
        return LinearForm.sum_of(sorted(s))
    rest = sorted(s - {i})
    form = LinearForm.sum_of(rest, Fraction(1) / c_value(kk - 1))
    return form + LinearForm.of(i, c_value(kk))


def _tree_registry(tree: LabeledTree) -> VarRegistry:
    g = tree.graph
    return VarRegistry(
        [Var("x", v, f"x[{v}]") for v in g.vertices] + [Var("w", e, f"w[{e}]") for e in g.edges]
    )


def elem_substitution(n: int, k: int, convention: str = "vertices") -> tuple[LabeledTree, VarRegistry, Substitution, VarRegistry]:
    """Truncated path tree, its own variables, and the substitution into ``x_1..x_n``.

    Returns ``(tree, tree_registry, substitution, target_registry)``; the
    substitution maps tree variables to linear forms in the target variables.
    """
    tree = truncated_path_tree(n, k, convention)
    target = elem_registry(n)
    treg = _tree_registry(tree)
    images = {}
    for v in tree.graph.vertices:
        s, kk, i = node_label(tree.paths[v], n, k)
        images[treg.find("x", v)] = _relabel(node_form(s, kk, i), target)
    for e in tree.graph.edges:
        j = tree.paths[e][-1]
        images[treg.find("w", e)] = LinearForm.of(target.find("x", j))
    return tree, treg, Substitution(images, strict=True), target


def _relabel(form: LinearForm, target: VarRegistry) -> LinearForm:
    return LinearForm({target.find("x", i): c for i, c in form.coeffs.items()})


def elem_M_tree(n: int, k: int, convention: str = "vertices", method: str = "auto") -> MultiPoly:
    """Matching polynomial of the truncated path tree pushed through the substitution.

    ``method="enumeration"`` expands over all matchings before substituting;
    otherwise the tree dynamic program runs directly on the images and shares
    subtrees carrying the same label.
    """
    if method == "enumeration" or method == "literal":
        tree, treg, sub, target = elem_substitution(n, k, convention)
        mu = matching_poly(tree.graph, treg, method="enumeration" if method == "enumeration" else "forest")
        return apply_substitution(mu, sub, target)
    return _elem_M_fused(n, k, convention)


def _elem_M_fused(n: int, k: int, convention: str) -> MultiPoly:
    target = elem_registry(n)
    cap = k if convention == "vertices" else k + 1
    one = MultiPoly.const(target, 1)
    xs = {i: MultiPoly.var(target, target.find("x", i)) for i in range(1, n + 1)}
    memo: dict[tuple[frozenset, int, int, int], tuple[MultiPoly, MultiPoly]] = {}

    def rec(s: frozenset, kk: int, i: int, depth_left: int) -> tuple[MultiPoly, MultiPoly]:
        key = (s, kk, i, depth_left)
        hit = memo.get(key)
        if hit is not None:
            return hit
        kids = sorted(s - {i}) if depth_left > 0 else []
        sub = [rec(s - {i}, kk - 1, j, depth_left - 1) for j in kids]
        a_list = [p[0] for p in sub]
        b = one
        for p in a_list:
            b = b * p
        a = _form_poly(node_form(s, kk, i), target) * b
        prefix = [one]
        for p in a_list[:-1]:
            prefix.append(prefix[-1] * p)
        suffix = one
        for idx in range(len(kids) - 1, -1, -1):
            j = kids[idx]
            a = a - xs[j] * xs[j] * sub[idx][1] * prefix[idx] * suffix
            suffix = suffix * a_list[idx]
        memo[key] = (a, b)
        return a, b

    return rec(frozenset(range(1, n + 1)), k, n, min(cap, n) - 1)[0]


def _form_poly(form: LinearForm, target: VarRegistry) -> MultiPoly:
    return _relabel(form, target).to_poly(target)


def elem_M_recursion(n: int, k: int) -> MultiPoly:
    """Closed recursion ``M_{S,k,i} = C_k e_k(S) / e_{k-1}(S - i) * prod_j M_{S-i,k-1,j}``, base ``e_1(S)``."""
    target = elem_registry(n)
    memo: dict[tuple[frozenset, int, int], MultiPoly] = {}

    def rec(s: frozenset, kk: int, i: int) -> MultiPoly:
        key = (s, kk, i)
        if key in memo:
            return memo[key]
        if kk <= 1:
            out = elem_poly(s, 1, target)
        else:
            rest = s - {i}
            num = elem_poly(s, kk, target).scale(c_value(kk))
            for j in sorted(rest):
                num = num * rec(rest, kk - 1, j)
            den = elem_poly(rest, kk - 1, target)
            out = exact_divide(num, den)
            if out is None:
                raise TheoremViolation(f"recursion step not polynomial at S={sorted(s)}, k={kk}, i={i}", num, den)
        memo[key] = out
        return out

    return rec(frozenset(range(1, n + 1)), k, n)


def elem_M(n: int, k: int, convention: str = "vertices", check: bool = True) -> MultiPoly:
    """``M_{[n],k,n}`` from the tree; with ``check`` also from the recursion, which must agree."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    tree_value = elem_M_tree(n, k, convention)
    if check and convention == "vertices":
        rec_value = elem_M_recursion(n, k)
        if rec_value != tree_value:
            raise TheoremViolation(f"tree and recursion disagree for n={n}, k={k}", tree_value, rec_value)
    return tree_value


def elemsym_pencil(n: int, k: int, convention: str = "vertices") -> Pencil:
    tree, treg, sub, target = elem_substitution(n, k, convention)
    g = tree.graph
    pos = {v: i for i, v in enumerate(g.vertices)}
    zero = LinearForm()
    rows = [[zero] * g.n for _ in range(g.n)]
    for v, i in pos.items():
        rows[i][i] = sub[treg.find("x", v)]
    for e, (a, b) in g.edges.items():
        f = sub[treg.find("w", e)]
        rows[pos[a]][pos[b]] = f
        rows[pos[b]][pos[a]] = f
    return Pencil(target, rows)


def elemsym_certificate(n: int, k: int, convention: str = "vertices") -> Certificate:
    target = elem_registry(n)
    h = elem_poly(range(1, n + 1), k, target)
    m = elem_M(n, k, convention)
    q = exact_divide(m, h)
    if q is None:
        raise TheoremViolation(f"e_{k} does not divide the tree polynomial for n={n} under the {convention} convention", m, h)
    return Certificate(
        h,
        q,
        elemsym_pencil(n, k, convention),
        tuple(1 for _ in range(n)),
        {"kind": "elemsym", "n": n, "k": k, "truncation": convention},
    )
