"""Path trees, clique trees and line-graph inversion."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graphs import Graph, GraphError, complete_graph, is_claw_free, is_simplicial_clique

PATH_TREE_BOUND = 100_000


class TreeBoundExceeded(GraphError):
    pass


@dataclass(frozen=True)
class LabeledTree:
    """A forest whose vertices and edges point back into an ambient graph.

    ``vertex_map`` sends a tree vertex to an ambient vertex id and ``edge_map``
    a tree edge id to an ambient edge id. For path trees ``paths`` records the
    path each tree vertex names.
    """

    graph: Graph
    vertex_map: dict[int, int]
    edge_map: dict[int, int]
    root: int | None = None
    paths: dict[int, tuple[int, ...]] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.graph.is_forest():
            raise GraphError("labeled tree must be acyclic")
        if self.vertex_map and set(self.vertex_map) != set(self.graph.vertices):
            raise GraphError("vertex_map must cover every tree vertex")
        if set(self.edge_map) != set(self.graph.edges):
            raise GraphError("edge_map must cover every tree edge")

    @property
    def n(self) -> int:
        return self.graph.n

    def children(self, v: int) -> list[int]:
        """Neighbours further from the root (requires a root)."""
        return [c for c in self.graph.neighbors(v) if self._parent()[c] == v]

    def _parent(self) -> dict[int, int | None]:
        cache = self.__dict__.get("_parent_cache")
        if cache is None:
            cache = {}
            roots = [self.root] if self.root is not None else []
            roots += [comp[0] for comp in self.graph.components() if self.root not in comp]
            for r in roots:
                cache[r] = None
                stack = [r]
                while stack:
                    v = stack.pop()
                    for w in self.graph.neighbors(v):
                        if w not in cache:
                            cache[w] = v
                            stack.append(w)
            object.__setattr__(self, "_parent_cache", cache)
        return cache

    def parent(self, v: int) -> int | None:
        return self._parent()[v]

    def delete_root(self) -> "LabeledTree":
        if self.root is None:
            raise GraphError("tree has no root")
        g = self.graph.delete_vertex(self.root)
        return LabeledTree(
            g,
            {v: self.vertex_map[v] for v in g.vertices} if self.vertex_map else {},
            {e: self.edge_map[e] for e in g.edges},
            None,
            {v: self.paths[v] for v in g.vertices} if self.paths else None,
        )

    def subtree(self, v: int) -> "LabeledTree":
        """Descendants of ``v`` (inclusive), rooted at ``v``."""
        keep = [v]
        stack = [v]
        while stack:
            u = stack.pop()
            for c in self.children(u):
                keep.append(c)
                stack.append(c)
        g = self.graph.induced_subgraph(keep)
        return LabeledTree(
            g,
            {u: self.vertex_map[u] for u in g.vertices} if self.vertex_map else {},
            {e: self.edge_map[e] for e in g.edges},
            v,
            {u: self.paths[u] for u in g.vertices} if self.paths else None,
        )

    def to_json(self) -> dict:
        return {
            "vertices": list(self.graph.vertices),
            "edges": [{"id": e, "ends": list(p)} for e, p in self.graph.edges.items()],
            "vertex_map": {str(k): v for k, v in self.vertex_map.items()},
            "edge_map": {str(k): v for k, v in self.edge_map.items()},
            "root": self.root,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LabeledTree":
        g = Graph(tuple(int(v) for v in data["vertices"]), {int(e["id"]): tuple(int(x) for x in e["ends"]) for e in data["edges"]})
        return cls(
            g,
            {int(k): int(v) for k, v in data.get("vertex_map", {}).items()},
            {int(k): int(v) for k, v in data["edge_map"].items()},
            data.get("root"),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _simple_paths(g: Graph, u: int, max_vertices: int | None, bound: int) -> list[tuple[int, ...]]:
    """Simple paths from ``u`` in depth-first order (parents before children)."""
    out: list[tuple[int, ...]] = []
    stack = [(u,)]
    while stack:
        p = stack.pop()
        out.append(p)
        if len(out) > bound:
            raise TreeBoundExceeded(f"path tree exceeds {bound} vertices")
        if max_vertices is not None and len(p) >= max_vertices:
            continue
        on = set(p)
        for w in reversed(g.neighbors(p[-1])):
            if w not in on:
                stack.append(p + (w,))
    return out


def _tree_of_paths(g: Graph, paths: list[tuple[int, ...]]) -> LabeledTree:
    index = {p: i for i, p in enumerate(paths)}
    edges = {}
    edge_map = {}
    for p, i in index.items():
        if len(p) > 1:
            edges[i] = (index[p[:-1]], i)
            edge_map[i] = g.edge_between(p[-2], p[-1])
    tree = Graph(tuple(range(len(paths))), edges)
    return LabeledTree(tree, {i: p[-1] for p, i in index.items()}, edge_map, 0, {i: p for p, i in index.items()})


def path_tree(g: Graph, u: int, bound: int = PATH_TREE_BOUND) -> LabeledTree:
    """Tree of simple paths from ``u``; tree vertex 0 is the trivial path.

    The tree edge joining a path to its one-step extension has the id of the
    longer path's tree vertex and maps to the last ambient edge of that path.
    """
    if not g.has_vertex(u):
        raise GraphError(f"unknown vertex {u}")
    return _tree_of_paths(g, _simple_paths(g, u, None, bound))


def truncated_path_tree(n: int, k: int, convention: str = "vertices", bound: int = PATH_TREE_BOUND) -> LabeledTree:
    """Path tree of ``K_n`` rooted at vertex ``n``, cut at depth.

    ``convention="vertices"`` keeps paths with at most ``k`` vertices;
    ``convention="edges"`` keeps paths with at most ``k`` edges.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    if convention == "vertices":
        cap = k
    elif convention == "edges":
        cap = k + 1
    else:
        raise ValueError(f"unknown truncation convention {convention!r}")
    g = complete_graph(n)
    return _tree_of_paths(g, _simple_paths(g, n, cap, bound))


# --- clique trees ---------------------------------------------------------------


@dataclass(frozen=True)
class BlockTree:
    """Connected block graph with a homomorphism ``phi`` into an ambient graph."""

    graph: Graph
    phi: dict[int, int]
    root: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if not self.blocks:
            object.__setattr__(self, "blocks", tuple(blocks_of(self.graph)))
        for b in self.blocks:
            if not self.graph.is_clique(b):
                raise GraphError("not a block graph: a block is not a clique")
            if len({self.phi[v] for v in b}) != len(b):
                raise GraphError("homomorphism is not injective on a block")

    @property
    def n(self) -> int:
        return self.graph.n

    def to_json(self) -> dict:
        return {
            "vertices": list(self.graph.vertices),
            "edges": [list(p) for p in self.graph.edges.values()],
            "phi": {str(k): v for k, v in self.phi.items()},
            "root": list(self.root),
            "blocks": [list(b) for b in self.blocks],
        }

    @classmethod
    def from_json(cls, data: dict) -> "BlockTree":
        g = Graph.build([int(v) for v in data["vertices"]], [tuple(p) for p in data["edges"]])
        return cls(
            g,
            {int(k): int(v) for k, v in data["phi"].items()},
            tuple(data["root"]),
            tuple(tuple(b) for b in data.get("blocks", [])),
        )


def blocks_of(g: Graph) -> list[tuple[int, ...]]:
    """Biconnected components (isolated vertices form singleton blocks)."""
    import networkx as nx

    from .graphs import to_networkx

    h = to_networkx(g)
    order = {v: i for i, v in enumerate(g.vertices)}
    out = [tuple(sorted(c, key=order.get)) for c in nx.biconnected_components(h)]
    out += [(v,) for v in g.vertices if g.degree(v) == 0]
    return sorted(out, key=lambda b: [order[v] for v in b])


def clique_tree(g: Graph, k) -> BlockTree:
    """Recursive clique tree rooted at the simplicial clique ``k``.

    Each vertex of the current root clique gets a fresh copy of its
    neighbourhood outside the clique, and the construction recurses on the
    graph with the clique deleted, rooted at that copy.
    """
    k = tuple(k)
    if not is_claw_free(g):
        raise GraphError("clique tree needs a claw-free graph")
    if not is_simplicial_clique(g, k):
        raise GraphError(f"{k} is not a simplicial clique")
    phi: dict[int, int] = {}
    edges: list[tuple[int, int]] = []

    def fresh(v: int) -> int:
        c = len(phi)
        phi[c] = v
        return c

    def join_clique(copies: list[int]) -> None:
        for i, a in enumerate(copies):
            for b in copies[i + 1 :]:
                edges.append((a, b))

    root = [fresh(v) for v in k]
    join_clique(root)
    work = [(g, root)]
    while work:
        h, copies = work.pop()
        kset = {phi[c] for c in copies}
        rest = h.delete_vertices(kset)
        for c in copies:
            ku = [w for w in h.neighbors(phi[c]) if w not in kset]
            if not ku:
                continue
            if not is_simplicial_clique(rest, ku):
                raise GraphError("recursion produced a non-simplicial clique; input is not simplicial")
            kcopies = [fresh(w) for w in ku]
            join_clique(kcopies)
            edges.extend((c, w) for w in kcopies)
            work.append((rest, kcopies))
    graph = Graph.build(list(range(len(phi))), edges)
    return BlockTree(graph, phi, tuple(root))


def tree_from_line_graph(b: BlockTree | Graph) -> LabeledTree:
    """A tree whose line graph is ``b``.

    One tree vertex per block of ``b``. A vertex of ``b`` lying in two blocks
    becomes the tree edge joining those blocks; a vertex in a single block
    becomes a pendant edge at that block. Tree edge ids equal the ``b``
    vertex ids they stand for (``edge_map`` is the identity), and ``vertex_map``
    is empty because tree vertices stand for blocks, not ambient vertices.
    """
    g = b.graph if isinstance(b, BlockTree) else b
    if not g.is_connected() or g.n == 0:
        raise GraphError("line-graph inversion needs a connected nonempty graph")
    blocks = blocks_of(g)
    member: dict[int, list[int]] = {v: [] for v in g.vertices}
    for i, blk in enumerate(blocks):
        if not g.is_clique(blk):
            raise GraphError("not a block graph")
        for v in blk:
            member[v].append(i)
    edges: dict[int, tuple[int, int]] = {}
    next_vertex = len(blocks)
    for v in g.vertices:
        owners = member[v]
        if len(owners) == 2:
            edges[v] = (owners[0], owners[1])
        elif len(owners) == 1:
            edges[v] = (owners[0], next_vertex)
            next_vertex += 1
        else:
            raise GraphError(f"vertex {v} lies in {len(owners)} blocks: the block graph contains a claw")
    tree = Graph(tuple(range(next_vertex)), edges)
    return LabeledTree(tree, {}, {v: v for v in g.vertices}, 0)
