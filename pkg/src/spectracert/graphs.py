"""Simple undirected graphs with stable vertex and edge ids."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

ENUMERATION_BOUND = 16


class GraphError(ValueError):
    pass


class SizeBoundExceeded(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph.

    Vertices are ints in insertion order; ``edges`` maps an int edge id to a
    sorted vertex pair. ``universe`` lists the vertex and edge ids of the
    graph this one was carved from, so that polynomials of subgraphs can be
    expressed over the parent's variables. It does not take part in equality.
    """

    vertices: tuple[int, ...]
    edges: dict[int, tuple[int, int]]
    vertex_labels: dict[int, str] = field(default_factory=dict)
    edge_labels: dict[int, str] = field(default_factory=dict)
    universe: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        seen = set()
        norm = {}
        for eid, (a, b) in self.edges.items():
            if a == b:
                raise GraphError(f"loop at vertex {a}")
            if a not in vs or b not in vs:
                raise GraphError(f"edge {eid} has an unknown endpoint")
            pair = (a, b) if a < b else (b, a)
            if pair in seen:
                raise GraphError(f"multi-edge between {a} and {b}")
            seen.add(pair)
            norm[eid] = pair
        object.__setattr__(self, "edges", dict(sorted(norm.items())))
        if self.universe is None:
            object.__setattr__(self, "universe", (tuple(self.vertices), tuple(self.edges)))
        adj: dict[int, dict[int, int]] = {v: {} for v in self.vertices}
        for eid, (a, b) in self.edges.items():
            adj[a][b] = eid
            adj[b][a] = eid
        object.__setattr__(self, "_adj", adj)

    # --- construction ----------------------------------------------------

    @classmethod
    def build(cls, n_or_vertices, edge_pairs: Iterable[tuple[int, int]] = (), *, vertex_labels=None, edge_labels=None) -> "Graph":
        if isinstance(n_or_vertices, int):
            vertices = tuple(range(1, n_or_vertices + 1))
        else:
            vertices = tuple(n_or_vertices)
        edges = {i: tuple(p) for i, p in enumerate(edge_pairs)}
        return cls(vertices, edges, dict(vertex_labels or {}), dict(edge_labels or {}))

    # --- queries ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, tuple(self.edges.items())))

    def __repr__(self) -> str:
        es = ", ".join(f"{self.edge_label(e)}={self.vertex_label(a)}{self.vertex_label(b)}" for e, (a, b) in self.edges.items())
        return f"Graph(V={[self.vertex_label(v) for v in self.vertices]}, E=[{es}])"

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertex_label(self, v: int) -> str:
        return self.vertex_labels.get(v, str(v))

    def edge_label(self, e: int) -> str:
        return self.edge_labels.get(e, str(e))

    def neighbors(self, v: int) -> list[int]:
        return list(self._adj[v])

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def adjacent(self, a: int, b: int) -> bool:
        return b in self._adj[a]

    def edge_between(self, a: int, b: int) -> int:
        return self._adj[a][b]

    def incident_edges(self, v: int) -> list[int]:
        return list(self._adj[v].values())

    def vertex_by_label(self, label: str) -> int:
        for v in self.vertices:
            if self.vertex_label(v) == label:
                return v
        raise GraphError(f"no vertex labelled {label!r}")

    def edge_by_label(self, label: str) -> int:
        for e in self.edges:
            if self.edge_label(e) == label:
                return e
        raise GraphError(f"no edge labelled {label!r}")

    def _check(self, v: int) -> None:
        if v not in self._adj:
            raise GraphError(f"unknown vertex {v}")

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                v = stack.pop()
                for w in self._adj[v]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            out.append(sorted(comp, key=self.vertices.index))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_tree(self) -> bool:
        return self.n > 0 and self.m == self.n - 1 and self.is_connected()

    def is_forest(self) -> bool:
        return self.m == self.n - len(self.components())

    def is_clique(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        return all(self.adjacent(a, b) for a, b in itertools.combinations(vs, 2))

    def max_degree(self) -> int:
        return max((self.degree(v) for v in self.vertices), default=0)

    # --- derived graphs ----------------------------------------------------

    def induced_subgraph(self, keep: Iterable[int]) -> "Graph":
        keep = set(keep)
        for v in keep:
            self._check(v)
        vs = tuple(v for v in self.vertices if v in keep)
        es = {e: p for e, p in self.edges.items() if p[0] in keep and p[1] in keep}
        return Graph(
            vs,
            es,
            self.vertex_labels,
            self.edge_labels,
            self.universe,
        )

    def delete_vertex(self, v: int) -> "Graph":
        self._check(v)
        return self.induced_subgraph(u for u in self.vertices if u != v)

    def delete_vertices(self, vs: Iterable[int]) -> "Graph":
        drop = set(vs)
        for v in drop:
            self._check(v)
        return self.induced_subgraph(u for u in self.vertices if u not in drop)

    def delete_closed_neighborhood(self, v: int) -> "Graph":
        self._check(v)
        return self.delete_vertices([v, *self._adj[v]])

    def delete_edge(self, e: int) -> "Graph":
        if e not in self.edges:
            raise GraphError(f"unknown edge {e}")
        return Graph(self.vertices, {k: p for k, p in self.edges.items() if k != e}, self.vertex_labels, self.edge_labels, self.universe)

    def closed_neighborhood(self, v: int) -> list[int]:
        return [v, *self._adj[v]]

    def with_universe(self, universe) -> "Graph":
        return Graph(self.vertices, self.edges, self.vertex_labels, self.edge_labels, universe)

    def relabel_ids(self, vmap: dict[int, int], emap: dict[int, int] | None = None) -> "Graph":
        """Rename ids (labels follow); the universe is reset."""
        if emap is None:
            emap = {e: i for i, e in enumerate(self.edges)}
        return Graph(
            tuple(vmap[v] for v in self.vertices),
            {emap[e]: (vmap[a], vmap[b]) for e, (a, b) in self.edges.items()},
            {vmap[v]: l for v, l in self.vertex_labels.items()},
            {emap[e]: l for e, l in self.edge_labels.items()},
        )

    def summary(self) -> str:
        return f"{self.n} vertices, {self.m} edges"


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """Union of two graphs; ``h`` is shifted if its ids collide with ``g``'s."""
    if set(g.vertices) & set(h.vertices) or set(g.edges) & set(h.edges):
        voff = max(g.vertices, default=0) + 1 - min(h.vertices, default=0)
        eoff = max(g.edges, default=-1) + 1 - min(h.edges, default=0)
        h = h.relabel_ids({v: v + voff for v in h.vertices}, {e: e + eoff for e in h.edges})
    return Graph(
        g.vertices + h.vertices,
        {**g.edges, **h.edges},
        {**g.vertex_labels, **h.vertex_labels},
        {**g.edge_labels, **h.edge_labels},
    )


def line_graph(g: Graph) -> Graph:
    """Vertices are the edge ids of ``g`` (labels carried over)."""
    eids = list(g.edges)
    pairs = []
    for i, j in itertools.combinations(eids, 2):
        if set(g.edges[i]) & set(g.edges[j]):
            pairs.append((i, j))
    return Graph(
        tuple(eids),
        {k: p for k, p in enumerate(pairs)},
        {e: g.edge_label(e) for e in eids},
    )


def is_claw_free(g: Graph) -> bool:
    for v in g.vertices:
        for a, b, c in itertools.combinations(g.neighbors(v), 3):
            if not (g.adjacent(a, b) or g.adjacent(a, c) or g.adjacent(b, c)):
                return False
    return True


def cliques(g: Graph, max_size: int | None = None) -> list[tuple[int, ...]]:
    """All nonempty cliques, by backtracking, vertices in graph order."""
    order = {v: i for i, v in enumerate(g.vertices)}
    out: list[tuple[int, ...]] = []

    def extend(current: list[int], cands: list[int]) -> None:
        for i, v in enumerate(cands):
            nxt = current + [v]
            out.append(tuple(nxt))
            if max_size is None or len(nxt) < max_size:
                extend(nxt, [w for w in cands[i + 1 :] if g.adjacent(v, w)])

    extend([], sorted(g.vertices, key=order.get))
    return out


def is_simplicial_clique(g: Graph, k: Iterable[int]) -> bool:
    k = list(k)
    if not k or not g.is_clique(k):
        return False
    ks = set(k)
    for u in k:
        outside = [w for w in g.neighbors(u) if w not in ks]
        if not g.is_clique(outside):
            return False
    return True


def simplicial_cliques(g: Graph) -> list[tuple[int, ...]]:
    return [k for k in cliques(g, g.max_degree() + 1) if is_simplicial_clique(g, k)]


# --- enumerations ----------------------------------------------------------


def _bound(g: Graph, bound: int) -> None:
    if g.n > bound:
        raise SizeBoundExceeded(f"{g.n} vertices exceeds enumeration bound {bound}")


def iter_matchings(g: Graph, bound: int = ENUMERATION_BOUND) -> Iterator[frozenset[int]]:
    """Every matching (as a frozenset of edge ids), the empty one first."""
    _bound(g, bound)
    eids = list(g.edges)

    def rec(i: int, used: frozenset, chosen: tuple) -> Iterator[frozenset[int]]:
        if i == len(eids):
            yield frozenset(chosen)
            return
        yield from rec(i + 1, used, chosen)
        a, b = g.edges[eids[i]]
        if a not in used and b not in used:
            yield from rec(i + 1, used | {a, b}, chosen + (eids[i],))

    yield from rec(0, frozenset(), ())


def enumerate_matchings(g: Graph, bound: int = ENUMERATION_BOUND) -> list[frozenset[int]]:
    return sorted(iter_matchings(g, bound), key=lambda m: (len(m), sorted(m)))


def matched_vertices(g: Graph, matching: Iterable[int]) -> set[int]:
    out: set[int] = set()
    for e in matching:
        out.update(g.edges[e])
    return out


def enumerate_independent_sets(g: Graph, bound: int = ENUMERATION_BOUND) -> list[frozenset[int]]:
    _bound(g, bound)
    vs = list(g.vertices)
    out: list[frozenset[int]] = []

    def rec(i: int, chosen: tuple) -> None:
        if i == len(vs):
            out.append(frozenset(chosen))
            return
        rec(i + 1, chosen)
        v = vs[i]
        if not any(g.adjacent(v, w) for w in chosen):
            rec(i + 1, chosen + (v,))

    rec(0, ())
    return sorted(out, key=lambda s: (len(s), sorted(s, key=vs.index)))


def count_perfect_matchings(g: Graph, bound: int = ENUMERATION_BOUND) -> int:
    _bound(g, bound)
    if g.n % 2:
        return 0

    def rec(remaining: frozenset) -> int:
        if not remaining:
            return 1
        v = min(remaining, key=g.vertices.index)
        total = 0
        for w in g.neighbors(v):
            if w in remaining:
                total += rec(remaining - {v, w})
        return total

    return rec(frozenset(g.vertices))


# --- generators --------------------------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph.build(n, itertools.combinations(range(1, n + 1), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph.build(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path_graph(n: int) -> Graph:
    return Graph.build(n, [(i, i + 1) for i in range(1, n)])


def complete_bipartite(m: int, n: int) -> Graph:
    return Graph.build(m + n, [(i, m + j) for i in range(1, m + 1) for j in range(1, n + 1)])


def star_graph(n: int) -> Graph:
    """Leaves ``1..n`` joined to the center ``n+1``; edge ``i`` is ``{i, n+1}``."""
    return Graph(
        tuple(range(1, n + 2)),
        {i: (i, n + 1) for i in range(1, n + 1)},
    )


def octahedron() -> Graph:
    """K_{2,2,2} on ``a..f`` with non-edges a-d, b-e, c-f."""
    labels = "abcdef"
    missing = {(0, 3), (1, 4), (2, 5)}
    pairs = [(i + 1, j + 1) for i, j in itertools.combinations(range(6), 2) if (i, j) not in missing]
    return Graph.build(6, pairs, vertex_labels={i + 1: c for i, c in enumerate(labels)})


def fig1_graph() -> Graph:
    """Four vertices, edges a={1,2}, b={2,3}, c={1,3}, d={3,4}, e={1,4}."""
    pairs = [(1, 2), (2, 3), (1, 3), (3, 4), (1, 4)]
    return Graph.build(4, pairs, edge_labels={i: c for i, c in enumerate("abcde")})


def graph_atlas(max_vertices: int, connected: bool = False) -> list[Graph]:
    """All graphs on 1..max_vertices vertices up to isomorphism (max 7)."""
    import networkx as nx

    if max_vertices > 7:
        raise SizeBoundExceeded("the graph atlas stops at 7 vertices")
    out = []
    for h in nx.graph_atlas_g():
        k = h.number_of_nodes()
        if k == 0 or k > max_vertices:
            continue
        if connected and not nx.is_connected(h):
            continue
        out.append(Graph.build(k, [(a + 1, b + 1) for a, b in h.edges()]))
    return out


def trees_up_to(max_vertices: int) -> list[Graph]:
    return [g for g in graph_atlas(max_vertices, connected=True) if g.is_tree()]


def canonical_form(g: Graph) -> tuple:
    """Isomorphism invariant by brute force over permutations (small graphs only)."""
    _bound(g, 9)
    vs = list(g.vertices)
    best = None
    for perm in itertools.permutations(range(len(vs))):
        pos = {v: perm[i] for i, v in enumerate(vs)}
        key = tuple(sorted(tuple(sorted((pos[a], pos[b]))) for a, b in g.edges.values()))
        if best is None or key < best:
            best = key
    return (len(vs), best)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    import networkx as nx

    return nx.is_isomorphic(to_networkx(g), to_networkx(h))


def to_networkx(g: Graph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges.values())
    return h


# --- JSON --------------------------------------------------------------------


def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": [g.vertex_label(v) for v in g.vertices],
        "edges": [{"id": g.edge_label(e), "ends": [g.vertex_label(a), g.vertex_label(b)]} for e, (a, b) in g.edges.items()],
    }


def graph_from_json(data: dict) -> Graph:
    labels = [str(v) for v in data["vertices"]]
    if len(set(labels)) != len(labels):
        raise GraphError("duplicate vertex label")
    vid = {l: i + 1 for i, l in enumerate(labels)}
    edges = {}
    elabels = {}
    seen = set()
    for i, e in enumerate(data.get("edges", [])):
        ends = e["ends"]
        if len(ends) != 2:
            raise GraphError("an edge needs exactly two ends")
        try:
            a, b = vid[str(ends[0])], vid[str(ends[1])]
        except KeyError as exc:
            raise GraphError(f"edge endpoint {exc.args[0]!r} is not a vertex") from None
        label = str(e.get("id", i))
        if label in seen:
            raise GraphError(f"duplicate edge id {label!r}")
        seen.add(label)
        edges[i] = (a, b)
        elabels[i] = label
    vlabels = {i + 1: l for i, l in enumerate(labels)}
    return Graph(tuple(range(1, len(labels) + 1)), edges, vlabels, elabels)


def graph_dumps(g: Graph) -> str:
    return json.dumps(graph_to_json(g), sort_keys=True)


def graph_loads(text: str) -> Graph:
    return graph_from_json(json.loads(text))


NAMED_GRAPHS = {
    "fig1": lambda: fig1_graph(),
    "octahedron": lambda: octahedron(),
    "Kn": complete_graph,
    "Cn": cycle_graph,
    "Pn": path_graph,
    "star": star_graph,
}


def named_graph(ref: str) -> Graph:
    """Resolve ``@fig1``, ``@octahedron``, ``@Kn:4``, ``@Cn:5``, ``@star:4``, ``@Pn:3``, ``@Kmn:2,3``."""
    name = ref[1:] if ref.startswith("@") else ref
    base, _, arg = name.partition(":")
    if base == "Kmn":
        m, n = (int(x) for x in arg.split(","))
        return complete_bipartite(m, n)
    if base not in NAMED_GRAPHS:
        raise GraphError(f"unknown named graph {ref!r}")
    maker = NAMED_GRAPHS[base]
    if base in ("fig1", "octahedron"):
        if arg:
            raise GraphError(f"{base} takes no parameter")
        return maker()
    if not arg:
        raise GraphError(f"{base} needs a size, e.g. @{base}:4")
    return maker(int(arg))


def label_set(g: Graph, vs: Sequence[int]) -> str:
    return "{" + ",".join(g.vertex_label(v) for v in vs) + "}"
