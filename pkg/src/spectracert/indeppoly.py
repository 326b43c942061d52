"""Independence polynomials: multivariate, weighted univariate and homogeneous."""

from __future__ import annotations

from typing import Callable, Mapping

from .graphs import Graph, GraphError, enumerate_independent_sets, is_claw_free, is_simplicial_clique
from .matchpoly import TheoremViolation, tree_dp, vertex_registry
from .polycore import MultiPoly, Number, UniPoly, Var, VarRegistry, as_rational, exact_divide
from .trees import BlockTree, LabeledTree, clique_tree

T_VAR = Var("t", None, "t")


def independence_registry(g: Graph) -> VarRegistry:
    """``x_v`` for each vertex of the universe of ``g``, then ``t``."""
    vs, _ = g.universe
    return VarRegistry([Var("x", v, f"x_{g.vertex_label(v)}") for v in vs] + [T_VAR])


def independence_poly(g: Graph, registry: VarRegistry | None = None) -> MultiPoly:
    """``sum_I prod_{v in I} x_v`` over independent sets, by enumeration."""
    reg = registry or vertex_registry(g)
    x = {v: MultiPoly.var(reg, reg.find("x", v)) for v in g.vertices}
    total = MultiPoly.zero(reg)
    for s in enumerate_independent_sets(g):
        term = MultiPoly.const(reg, 1)
        for v in s:
            term = term * x[v]
        total = total + term
    return total


def weighted_independence_univariate(g: Graph, weights: Mapping[int, Number] | None = None) -> UniPoly:
    """``sum_I (prod_{v in I} lambda_v) t^|I|``; unit weights by default."""
    lam = {v: as_rational((weights or {}).get(v, 1)) for v in g.vertices}
    order = {v: i for i, v in enumerate(g.vertices)}
    memo: dict[frozenset, UniPoly] = {}

    def rec(s: frozenset) -> UniPoly:
        if not s:
            return UniPoly([1])
        hit = memo.get(s)
        if hit is not None:
            return hit
        v = min(s, key=order.get)
        rest = s - {v}
        out = rec(rest)
        if lam[v]:
            out = out + UniPoly([0, lam[v]]) * rec(rest - set(g.neighbors(v)))
        memo[s] = out
        return out

    return rec(frozenset(g.vertices))


def _homogeneous(g: Graph, xvar: Callable[[int], MultiPoly], t: MultiPoly, one: MultiPoly) -> MultiPoly:
    order = {v: i for i, v in enumerate(g.vertices)}
    memo: dict[frozenset, MultiPoly] = {}
    t2 = t * t
    t_pow = [one]

    def tp(k: int) -> MultiPoly:
        while len(t_pow) <= k:
            t_pow.append(t_pow[-1] * t2)
        return t_pow[k]

    def rec(s: frozenset) -> MultiPoly:
        if not s:
            return one
        hit = memo.get(s)
        if hit is not None:
            return hit
        v = min(s, key=order.get)
        rest = s - {v}
        nb = [w for w in g.neighbors(v) if w in rest]
        xv = xvar(v)
        out = t2 * rec(rest) - xv * xv * tp(len(nb)) * rec(rest - set(nb))
        memo[s] = out
        return out

    out = one
    for comp in g.components():
        out = out * rec(frozenset(comp))
    return out


def independence_poly_homogeneous(g: Graph, registry: VarRegistry | None = None) -> MultiPoly:
    """``sum_I (-1)^|I| x_I^2 t^(2|V| - 2|I|)``, homogeneous of degree ``2|V|``."""
    reg = registry or independence_registry(g)
    t = MultiPoly.var(reg, reg.find("t"))
    return _homogeneous(g, lambda v: MultiPoly.var(reg, reg.find("x", v)), t, MultiPoly.const(reg, 1))


def independence_poly_homogeneous_enum(g: Graph, registry: VarRegistry | None = None) -> MultiPoly:
    reg = registry or independence_registry(g)
    t = MultiPoly.var(reg, reg.find("t"))
    total = MultiPoly.zero(reg)
    for s in enumerate_independent_sets(g):
        term = t ** (2 * (g.n - len(s))) * (-1) ** len(s)
        for v in s:
            term = term * MultiPoly.var(reg, reg.find("x", v), 2)
        total = total + term
    return total


def block_tree_independence(b: BlockTree, registry: VarRegistry) -> MultiPoly:
    """Homogeneous independence polynomial of a clique tree, relabelled into the ambient graph."""
    t = MultiPoly.var(registry, registry.find("t"))
    return _homogeneous(b.graph, lambda v: MultiPoly.var(registry, registry.find("x", b.phi[v])), t, MultiPoly.const(registry, 1))


def line_tree_matching(tree: LabeledTree, b: BlockTree, registry: VarRegistry) -> MultiPoly:
    """Matching polynomial of a line-graph preimage with tree vertices set to ``t`` and
    each tree edge set to the ambient vertex variable of the block-tree vertex it stands for."""
    t = MultiPoly.var(registry, registry.find("t"))
    one = MultiPoly.const(registry, 1)
    g = tree.graph
    xsq = {}
    for e, bv in tree.edge_map.items():
        x = MultiPoly.var(registry, registry.find("x", b.phi[bv]))
        xsq[e] = x * x
    out = one
    for comp in g.components():
        root = comp[0]
        parent = {root: None}
        stack = [root]
        kids: dict[int, list[int]] = {}
        while stack:
            v = stack.pop()
            kids[v] = [w for w in g.neighbors(v) if w != parent[v]]
            for w in kids[v]:
                parent[w] = v
                stack.append(w)
        a, _ = tree_dp(kids.__getitem__, root, lambda v: t, lambda v, c: xsq[g.edge_between(v, c)], one)
        out = out * a
    return out


def line_graph_defect(b: BlockTree, tree: LabeledTree) -> int:
    """Power of ``t`` separating the two sides of the line-graph bridge."""
    return 2 * b.n - tree.n


def check_simplicial(g: Graph, k) -> None:
    if not is_claw_free(g):
        raise GraphError("graph is not claw-free")
    if not is_simplicial_clique(g, k):
        raise GraphError(f"{tuple(k)} is not a simplicial clique")


def clique_tree_quotient(g: Graph, k, registry: VarRegistry | None = None) -> MultiPoly:
    """Exact quotient of the clique-tree independence polynomial by that of ``g``."""
    check_simplicial(g, k)
    reg = registry or independence_registry(g)
    b = clique_tree(g, k)
    num = block_tree_independence(b, reg)
    den = independence_poly_homogeneous(g, reg)
    q = exact_divide(num, den)
    if q is None:
        raise TheoremViolation(f"independence polynomial does not divide the clique-tree polynomial for K={tuple(k)}", num, den)
    return q
