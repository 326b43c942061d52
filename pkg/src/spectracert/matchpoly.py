"""Matching polynomials of graphs and path trees, and Wagner's activity polynomials."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .graphs import Graph, GraphError, iter_matchings, matched_vertices
from .polycore import MultiPoly, Number, UniPoly, Var, VarRegistry, as_rational, exact_divide
from .trees import PATH_TREE_BOUND, LabeledTree


class TheoremViolation(ArithmeticError):
    """A divisibility that must hold did not; carries both polynomials."""

    def __init__(self, message: str, numerator: MultiPoly | None = None, denominator: MultiPoly | None = None):
        super().__init__(message)
        self.numerator = numerator
        self.denominator = denominator


def matching_registry(g: Graph) -> VarRegistry:
    """``x_v`` for every vertex then ``w_e`` for every edge of the universe of ``g``."""
    vs, es = g.universe
    return VarRegistry(
        [Var("x", v, f"x_{g.vertex_label(v)}") for v in vs] + [Var("w", e, f"w_{g.edge_label(e)}") for e in es]
    )


def vertex_registry(g: Graph) -> VarRegistry:
    vs, _ = g.universe
    return VarRegistry([Var("x", v, f"x_{g.vertex_label(v)}") for v in vs])


def _xw(reg: VarRegistry):
    x = {v.origin: MultiPoly.var(reg, v) for v in reg.of_kind("x")}
    w2 = {v.origin: MultiPoly.var(reg, v, 2) for v in reg.of_kind("w")}
    return x, w2


def matching_poly(g: Graph, registry: VarRegistry | None = None, method: str = "auto") -> MultiPoly:
    """Homogeneous multivariate matching polynomial.

    ``method`` is ``"recursion"`` (vertex elimination), ``"forest"`` (tree
    dynamic programming, forests only), ``"enumeration"``, or ``"auto"``.
    """
    reg = registry or matching_registry(g)
    if method == "auto":
        method = "forest" if g.is_forest() else "recursion"
    if method == "enumeration":
        return _matching_enum(g, reg)
    if method == "forest":
        if not g.is_forest():
            raise GraphError("forest method needs an acyclic graph")
        return _matching_forest(g, reg)
    if method == "recursion":
        return _matching_rec(g, reg)
    raise ValueError(f"unknown method {method!r}")


def _matching_enum(g: Graph, reg: VarRegistry) -> MultiPoly:
    x, w2 = _xw(reg)
    total = MultiPoly.zero(reg)
    for m in iter_matchings(g):
        covered = matched_vertices(g, m)
        term = MultiPoly.const(reg, (-1) ** len(m))
        for v in g.vertices:
            if v not in covered:
                term = term * x[v]
        for e in m:
            term = term * w2[e]
        total = total + term
    return total


def _matching_rec(g: Graph, reg: VarRegistry) -> MultiPoly:
    x, w2 = _xw(reg)
    order = {v: i for i, v in enumerate(g.vertices)}
    memo: dict[frozenset, MultiPoly] = {}
    one = MultiPoly.const(reg, 1)

    def mu(s: frozenset) -> MultiPoly:
        if not s:
            return one
        hit = memo.get(s)
        if hit is not None:
            return hit
        u = min(s, key=order.get)
        rest = s - {u}
        out = x[u] * mu(rest)
        for v in g.neighbors(u):
            if v in rest:
                out = out - w2[g.edge_between(u, v)] * mu(rest - {v})
        memo[s] = out
        return out

    out = one
    for comp in g.components():
        out = out * mu(frozenset(comp))
    return out


def tree_dp(children, root, xvar, w2edge, one):
    """Return (matching poly of subtree, same with root deleted) for ``root``."""
    post = []
    stack = [root]
    while stack:
        v = stack.pop()
        post.append(v)
        stack.extend(children(v))
    a_of: dict = {}
    b_of: dict = {}
    for v in reversed(post):
        kids = children(v)
        a_list = [a_of[c] for c in kids]
        b = _product(a_list, one)
        a = xvar(v) * b
        if kids:
            prefix = [one]
            for p in a_list[:-1]:
                prefix.append(prefix[-1] * p)
            suffix = one
            for i in range(len(kids) - 1, -1, -1):
                c = kids[i]
                a = a - w2edge(v, c) * b_of[c] * prefix[i] * suffix
                suffix = suffix * a_list[i]
        a_of[v], b_of[v] = a, b
        for c in kids:
            del a_of[c], b_of[c]
    return a_of[root], b_of[root]


def _product(items, one):
    out = one
    for p in items:
        out = out * p
    return out


def _matching_forest(g: Graph, reg: VarRegistry) -> MultiPoly:
    x, w2 = _xw(reg)
    one = MultiPoly.const(reg, 1)
    out = one
    for comp in g.components():
        parent = {comp[0]: None}
        stack = [comp[0]]
        kids: dict[int, list[int]] = {}
        while stack:
            v = stack.pop()
            kids[v] = [w for w in g.neighbors(v) if w != parent[v]]
            for w in kids[v]:
                parent[w] = v
                stack.append(w)
        a, _ = tree_dp(kids.__getitem__, comp[0], x.__getitem__, lambda v, c: w2[g.edge_between(v, c)], one)
        out = out * a
    return out


def matching_poly_univariate(g: Graph) -> UniPoly:
    """``x_v -> t``, ``w_e -> 1``: the classical matching polynomial."""
    reg = matching_registry(g)
    return matching_poly(g, reg).collapse(reg.of_kind("x"))


def matching_numbers(g: Graph) -> list[int]:
    counts: dict[int, int] = {}
    for m in iter_matchings(g):
        counts[len(m)] = counts.get(len(m), 0) + 1
    return [counts.get(k, 0) for k in range(max(counts) + 1)]


def heilmann_lieb_poly(g: Graph, weights: Mapping[int, Number] | None = None, registry: VarRegistry | None = None) -> MultiPoly:
    """``sum_M (-1)^|M| prod_{ij in M} lambda_ij x_i x_j``; unit weights by default."""
    reg = registry or vertex_registry(g)
    x = {v.origin: MultiPoly.var(reg, v) for v in reg.of_kind("x")}
    lam = {e: as_rational((weights or {}).get(e, 1)) for e in g.edges}
    order = {v: i for i, v in enumerate(g.vertices)}
    memo: dict[frozenset, MultiPoly] = {}
    one = MultiPoly.const(reg, 1)

    def rec(s: frozenset) -> MultiPoly:
        if not s:
            return one
        hit = memo.get(s)
        if hit is not None:
            return hit
        u = min(s, key=order.get)
        rest = s - {u}
        out = rec(rest)
        for v in g.neighbors(u):
            if v in rest:
                lv = lam[g.edge_between(u, v)]
                if lv:
                    out = out - (x[u] * x[v]).scale(lv) * rec(rest - {v})
        memo[s] = out
        return out

    return rec(frozenset(g.vertices))


# --- path trees ---------------------------------------------------------------------


def eta(tree: LabeledTree, registry: VarRegistry) -> MultiPoly:
    """Matching polynomial of a labeled forest with variables pulled back to the ambient graph."""
    xs = {v.origin: MultiPoly.var(registry, v) for v in registry.of_kind("x")}
    w2s = {v.origin: MultiPoly.var(registry, v, 2) for v in registry.of_kind("w")}
    g = tree.graph
    one = MultiPoly.const(registry, 1)
    out = one
    comps = g.components()
    for comp in comps:
        root = tree.root if tree.root in comp else comp[0]
        parent = {root: None}
        stack = [root]
        kids: dict[int, list[int]] = {}
        while stack:
            v = stack.pop()
            kids[v] = [w for w in g.neighbors(v) if w != parent[v]]
            for w in kids[v]:
                parent[w] = v
                stack.append(w)
        a, _ = tree_dp(
            kids.__getitem__,
            root,
            lambda v: xs[tree.vertex_map[v]],
            lambda v, c: w2s[tree.edge_map[g.edge_between(v, c)]],
            one,
        )
        out = out * a
    return out


class PathTreeEta:
    """Fused computation of path-tree matching polynomials.

    The subtree below a path ``p`` only depends on the set of vertices of
    ``p`` other than its endpoint, and on that endpoint, so results are
    shared between paths visiting the same vertices in a different order.
    """

    def __init__(self, g: Graph, registry: VarRegistry | None = None, bound: int = PATH_TREE_BOUND):
        self.g = g
        self.registry = registry or matching_registry(g)
        self.x, self.w2 = _xw(self.registry)
        self.one = MultiPoly.const(self.registry, 1)
        self.memo: dict[tuple[frozenset, int], tuple[MultiPoly, MultiPoly]] = {}
        self.bound = bound

    def subtree(self, removed: frozenset, last: int) -> tuple[MultiPoly, MultiPoly]:
        key = (removed, last)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        g = self.g
        blocked = removed | {last}
        kids = [c for c in g.neighbors(last) if c not in blocked]
        sub = [self.subtree(blocked, c) for c in kids]
        a_list = [s[0] for s in sub]
        b = _product(a_list, self.one)
        a = self.x[last] * b
        prefix = [self.one]
        for p in a_list[:-1]:
            prefix.append(prefix[-1] * p)
        suffix = self.one
        for i in range(len(kids) - 1, -1, -1):
            a = a - self.w2[g.edge_between(last, kids[i])] * sub[i][1] * prefix[i] * suffix
            suffix = suffix * a_list[i]
        self.memo[key] = (a, b)
        if len(self.memo) > self.bound:
            raise MemoryError("path tree memo exceeded its bound")
        return a, b

    def eta(self, u: int) -> MultiPoly:
        return self.subtree(frozenset(), u)[0]

    def eta_without_root(self, u: int) -> MultiPoly:
        return self.subtree(frozenset(), u)[1]


def eta_path_tree(g: Graph, u: int, registry: VarRegistry | None = None) -> MultiPoly:
    if not g.has_vertex(u):
        raise GraphError(f"unknown vertex {u}")
    return PathTreeEta(g, registry).eta(u)


def eta_path_tree_value(g: Graph, u: int, x: Mapping[int, Number], w: Mapping[int, Number]) -> Number:
    """Value of the path-tree polynomial at ``x_v = x[v]``, ``w_e = w[e]`` without expanding it."""
    memo: dict[tuple[frozenset, int], tuple[Number, Number]] = {}

    def rec(removed: frozenset, last: int) -> tuple[Number, Number]:
        key = (removed, last)
        if key in memo:
            return memo[key]
        blocked = removed | {last}
        kids = [c for c in g.neighbors(last) if c not in blocked]
        sub = [rec(blocked, c) for c in kids]
        b: Number = 1
        for a_c, _ in sub:
            b = b * a_c
        a = x[last] * b
        for c, (a_c, b_c) in zip(kids, sub):
            if a_c:
                a = a - w[g.edge_between(last, c)] ** 2 * b_c * (b / a_c)
            else:
                rest: Number = 1
                for d, (a_d, _) in zip(kids, sub):
                    if d != c:
                        rest = rest * a_d
                a = a - w[g.edge_between(last, c)] ** 2 * b_c * rest
        memo[key] = (a, b)
        return a, b

    return rec(frozenset(), u)[0]


def path_tree_quotient(g: Graph, u: int, registry: VarRegistry | None = None, max_terms: int | None = None) -> MultiPoly:
    """Exact quotient of the path-tree polynomial by the matching polynomial of ``u``'s component."""
    reg = registry or matching_registry(g)
    comp = next(c for c in g.components() if u in c)
    h = g.induced_subgraph(comp)
    num = eta_path_tree(h, u, reg)
    den = matching_poly(h, reg)
    q = exact_divide(num, den, max_terms=max_terms)
    if q is None:
        raise TheoremViolation(f"matching polynomial does not divide the path-tree polynomial at root {u}", num, den)
    return q


def path_tree_quotient_factors(g: Graph, u: int, registry: VarRegistry | None = None) -> list[tuple[MultiPoly, int]]:
    """The same quotient as a product of matching polynomials of subgraphs.

    Removing ``u`` splits its component into pieces; a piece meeting ``k``
    neighbours of ``u`` contributes its matching polynomial to the power
    ``k - 1`` together with the quotients of each of those neighbours inside it.
    """
    reg = registry or matching_registry(g)
    memo: dict[tuple[frozenset, int], list] = {}

    def rec(h: Graph, root: int) -> list[tuple[frozenset, int]]:
        key = (frozenset(h.vertices), root)
        if key in memo:
            return memo[key]
        rest = h.delete_vertex(root)
        out: list[tuple[frozenset, int]] = []
        nbrs = set(h.neighbors(root))
        for comp in rest.components():
            inside = [v for v in comp if v in nbrs]
            if not inside:
                continue
            piece = rest.induced_subgraph(comp)
            if len(inside) > 1:
                out.append((frozenset(comp), len(inside) - 1))
            for v in inside:
                out.extend(rec(piece, v))
        memo[key] = out
        return out

    comp = next(c for c in g.components() if u in c)
    raw = rec(g.induced_subgraph(comp), u)
    merged: dict[frozenset, int] = {}
    for s, k in raw:
        merged[s] = merged.get(s, 0) + k
    order = {v: i for i, v in enumerate(g.vertices)}
    keys = sorted(merged, key=lambda s: (len(s), sorted(order[v] for v in s)))
    return [(matching_poly(g.induced_subgraph(s), reg), merged[s]) for s in keys]


def expand_factors(factors: Sequence[tuple[MultiPoly, int]], registry: VarRegistry) -> MultiPoly:
    out = MultiPoly.const(registry, 1)
    for p, k in factors:
        out = out * p**k
    return out


def evaluate_factors(factors: Sequence[tuple[MultiPoly, int]], point) -> Number:
    out: Number = 1
    for p, k in factors:
        out = out * p.evaluate(point) ** k
    return out


# --- Wagner polynomials ----------------------------------------------------------------

Activities = Mapping[int, Sequence[Number]]


def check_activities(g: Graph, acts: Activities) -> dict[int, tuple[Number, ...]]:
    out = {}
    for v in g.vertices:
        if v not in acts:
            raise ValueError(f"missing activities for vertex {v}")
        seq = tuple(as_rational(a) for a in acts[v])
        if len(seq) != g.degree(v) + 1:
            raise ValueError(f"vertex {v} has degree {g.degree(v)} but {len(seq)} activities")
        out[v] = seq
    return out


def matching_activities(g: Graph) -> dict[int, tuple[int, ...]]:
    """Activities ``(1, 1, 0, ...)`` that select matchings."""
    return {v: (1, 1, *([0] * (g.degree(v) - 1)))[: g.degree(v) + 1] for v in g.vertices}


def shift_activities(acts: Activities, vertices) -> dict[int, tuple[Number, ...]]:
    """Drop the first activity at each of ``vertices``."""
    vs = set(vertices)
    return {v: tuple(seq[1:]) if v in vs else tuple(seq) for v, seq in acts.items()}


def truncate_activities(g: Graph, acts: Activities) -> dict[int, tuple[Number, ...]]:
    return {v: tuple(acts[v][: g.degree(v) + 1]) for v in g.vertices}


def wagner_poly(g: Graph, activities: Activities, registry: VarRegistry | None = None, edge_bound: int = 20) -> MultiPoly:
    """``sum_{H subset E} (-1)^|H| u_{deg_H} w^{2H} x^{deg_G - deg_H}`` by direct expansion."""
    acts = check_activities(g, activities)
    if g.m > edge_bound:
        raise ValueError(f"{g.m} edges exceeds the subset-expansion bound {edge_bound}")
    reg = registry or matching_registry(g)
    eids = list(g.edges)
    acc: dict[int, Number] = {}
    xi = {v: reg.index(reg.find("x", v)) for v in g.vertices}
    wi = {e: reg.index(reg.find("w", e)) for e in eids}
    for r in range(len(eids) + 1):
        for sub in itertools.combinations(eids, r):
            deg = {v: 0 for v in g.vertices}
            for e in sub:
                a, b = g.edges[e]
                deg[a] += 1
                deg[b] += 1
            coeff: Number = (-1) ** r
            for v in g.vertices:
                coeff *= acts[v][deg[v]]
                if not coeff:
                    break
            if not coeff:
                continue
            vec = [0] * reg.n
            for v in g.vertices:
                vec[xi[v]] = g.degree(v) - deg[v]
            for e in sub:
                vec[wi[e]] = 2
            k = reg.pack(vec)
            acc[k] = acc.get(k, 0) + coeff
    return MultiPoly(reg, acc)


def wagner_by_edge_recurrence(g: Graph, activities: Activities, registry: VarRegistry | None = None) -> MultiPoly:
    """Same polynomial, by repeatedly deleting the last edge."""
    acts = check_activities(g, activities)
    reg = registry or matching_registry(g)

    def rec(h: Graph, u: dict) -> MultiPoly:
        if not h.edges:
            coeff: Number = 1
            for v in h.vertices:
                coeff *= u[v][0]
            return MultiPoly.const(reg, coeff)
        e = max(h.edges)
        a, b = h.edges[e]
        rest = h.delete_edge(e)
        keep = truncate_activities(rest, u)
        shifted = truncate_activities(rest, shift_activities(u, (a, b)))
        xa = MultiPoly.var(reg, reg.find("x", a))
        xb = MultiPoly.var(reg, reg.find("x", b))
        we = MultiPoly.var(reg, reg.find("w", e), 2)
        return xa * xb * rec(rest, keep) - we * rec(rest, shifted)

    return rec(g, acts)


def key_polynomial(activities: Sequence[Number]) -> UniPoly:
    """``sum_j binom(d, j) u_j z^j`` with ``d = len(activities) - 1``."""
    d = len(activities) - 1
    return UniPoly([comb(d, j) * as_rational(u) for j, u in enumerate(activities)])


def random_activities(g: Graph, rng, lo: int = -5, hi: int = 5, den: int = 4) -> dict[int, tuple[Fraction, ...]]:
    return {
        v: tuple(Fraction(int(rng.integers(lo * den, hi * den + 1)), den) for _ in range(g.degree(v) + 1))
        for v in g.vertices
    }
