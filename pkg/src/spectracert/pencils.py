"""Linear matrix pencils, determinantal certificates and their exact verification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .graphs import Graph, GraphError
from .hyperbolicity import SampleReport, cone_inclusion_sample_test, random_point
from .indeppoly import (
    check_simplicial,
    clique_tree_quotient,
    independence_poly_homogeneous,
    independence_registry,
    line_graph_defect,
)
from .matchpoly import (
    expand_factors,
    matching_poly,
    matching_registry,
    path_tree_quotient,
    path_tree_quotient_factors,
)
from .polycore import (
    LinearForm,
    MultiPoly,
    Number,
    VarRegistry,
    as_point,
    as_rational,
    format_rational,
    parse_rational,
    registry_from_json,
    registry_to_json,
)
from .trees import LabeledTree, clique_tree, path_tree, tree_from_line_graph

SYMBOLIC_BOUND = 12
FORMAT_VERSION = 1


# --- exact linear algebra ----------------------------------------------------------


def _integer_rows(m: Sequence[Sequence[Number]]) -> tuple[list[list[int]], int]:
    """Scale each row to integers; returns the rows and the product of the scales."""
    rows = []
    scale = 1
    for row in m:
        den = 1
        for c in row:
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
        rows.append([int(c * den) for c in row])
        scale *= den
    return rows, scale


def bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix (row pivoting)."""
    n = len(a)
    if n == 0:
        return 1
    a = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det_rational(m: Sequence[Sequence[Number]]) -> Number:
    rows, scale = _integer_rows(m)
    d = Fraction(bareiss_det(rows), scale)
    return d.numerator if d.denominator == 1 else d


def leading_minors(m: Sequence[Sequence[Number]]) -> list[Number]:
    """Leading principal minors, via Bareiss elimination without pivoting."""
    n = len(m)
    den = 1
    for row in m:
        for c in row:
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
    a = [[int(c * den) for c in row] for row in m]
    minors = []
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            minors.append(0)
            break
        minors.append(Fraction(a[k][k], den ** (k + 1)))
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * akk - aik * a[k][j]) // prev
        prev = akk
    return [c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c for c in minors]


def is_symmetric(m: Sequence[Sequence[Number]]) -> bool:
    n = len(m)
    return all(len(row) == n for row in m) and all(m[i][j] == m[j][i] for i in range(n) for j in range(i))


def is_positive_definite(m: Sequence[Sequence[Number]]) -> bool:
    if not is_symmetric(m):
        raise ValueError("matrix is not symmetric")
    minors = leading_minors(m)
    return len(minors) == len(m) and all(c > 0 for c in minors)


# --- pencils -----------------------------------------------------------------------


class Pencil:
    """Symmetric matrix of homogeneous linear forms over a registry."""

    def __init__(self, registry: VarRegistry, entries: Sequence[Sequence[LinearForm]]):
        self.registry = registry
        self.entries = tuple(tuple(row) for row in entries)
        d = self.dim = len(self.entries)
        for i, row in enumerate(self.entries):
            if len(row) != d:
                raise ValueError("pencil must be square")
            for j in range(i):
                if row[j] != self.entries[j][i]:
                    raise ValueError(f"pencil is not symmetric at ({i}, {j})")
            for f in row:
                if not f.is_homogeneous():
                    raise ValueError("pencil entries must be homogeneous linear forms")
                for v in f.coeffs:
                    if v not in registry:
                        raise ValueError(f"pencil mentions {v}, which is not in the registry")

    def __eq__(self, other) -> bool:
        return isinstance(other, Pencil) and self.registry == other.registry and self.entries == other.entries

    def evaluate(self, point) -> list[list[Number]]:
        vals = dict(zip(self.registry.vars, as_point(self.registry, point)))
        return [[f.evaluate(vals) if f.coeffs else 0 for f in row] for row in self.entries]

    def coefficient_matrices(self) -> dict:
        """The constant symmetric matrices ``A_i`` with ``pencil = sum x_i A_i``."""
        out = {}
        for i, row in enumerate(self.entries):
            for j, f in enumerate(row):
                for v, c in f.coeffs.items():
                    mat = out.setdefault(v, [[0] * self.dim for _ in range(self.dim)])
                    mat[i][j] = c
        return out

    def direct_sum(self, other: "Pencil") -> "Pencil":
        if other.registry != self.registry:
            raise ValueError("registries differ")
        zero = LinearForm()
        rows = [list(r) + [zero] * other.dim for r in self.entries]
        rows += [[zero] * self.dim + list(r) for r in other.entries]
        return Pencil(self.registry, rows)

    def with_entry(self, i: int, j: int, form: LinearForm) -> "Pencil":
        rows = [list(r) for r in self.entries]
        rows[i][j] = form
        rows[j][i] = form
        return Pencil(self.registry, rows)

    def to_json(self) -> dict:
        return {"dim": self.dim, "entries": [[f.to_json(self.registry) for f in row] for row in self.entries]}

    @classmethod
    def from_json(cls, data: dict, registry: VarRegistry) -> "Pencil":
        entries = [[LinearForm.from_json(f, registry) for f in row] for row in data["entries"]]
        if len(entries) != data["dim"]:
            raise ValueError("pencil dimension does not match its entries")
        return cls(registry, entries)


def tree_pencil(tree: LabeledTree, registry: VarRegistry) -> Pencil:
    """Vertex variables on the diagonal, edge variables at tree edges, zero elsewhere."""
    g = tree.graph
    pos = {v: i for i, v in enumerate(g.vertices)}
    zero = LinearForm()
    rows = [[zero] * g.n for _ in range(g.n)]
    for v, i in pos.items():
        rows[i][i] = LinearForm.of(registry.find("x", tree.vertex_map[v]))
    for e, (a, b) in g.edges.items():
        f = LinearForm.of(registry.find("w", tree.edge_map[e]))
        rows[pos[a]][pos[b]] = f
        rows[pos[b]][pos[a]] = f
    return Pencil(registry, rows)


def pencil_eval_det(p: Pencil, point) -> Number:
    return det_rational(p.evaluate(point))


def pencil_symbolic_det(p: Pencil, bound: int = SYMBOLIC_BOUND) -> MultiPoly:
    if p.dim > bound:
        raise ValueError(f"symbolic determinant limited to dimension {bound}")
    reg = p.registry
    return symbolic_det([[f.to_poly(reg) for f in row] for row in p.entries], reg)


def symbolic_det(rows: Sequence[Sequence[MultiPoly]], registry: VarRegistry) -> MultiPoly:
    """Expansion along rows with memoised column subsets (no division)."""
    n = len(rows)
    layer = {0: MultiPoly.const(registry, 1)}
    for r in range(n):
        nxt: dict[int, MultiPoly] = {}
        for mask, val in layer.items():
            if val.is_zero():
                continue
            for j in range(n):
                if mask >> j & 1:
                    continue
                a = rows[r][j]
                if a.is_zero():
                    continue
                # sign from the number of chosen columns to the right of j
                sign = -1 if bin(mask >> (j + 1)).count("1") % 2 else 1
                term = a * val
                nm = mask | (1 << j)
                nxt[nm] = nxt.get(nm, MultiPoly.zero(registry)) + (term if sign > 0 else -term)
        layer = nxt
    return layer.get((1 << n) - 1, MultiPoly.zero(registry))


# --- certificates ---------------------------------------------------------------------


@dataclass
class Certificate:
    h: MultiPoly
    q: MultiPoly
    pencil: Pencil
    direction: tuple
    provenance: dict = field(default_factory=dict)

    @property
    def registry(self) -> VarRegistry:
        return self.h.registry

    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "vars": registry_to_json(self.registry),
            "h": self.h.to_json(),
            "q": self.q.to_json(),
            "pencil": self.pencil.to_json(),
            "direction": [format_rational(c) for c in self.direction],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        if data.get("format_version", FORMAT_VERSION) != FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {data.get('format_version')}")
        reg = registry_from_json(data["vars"])
        h = MultiPoly.from_json(data["h"])
        q = MultiPoly.from_json(data["q"])
        if h.registry != reg or q.registry != reg:
            raise ValueError("h and q must use the certificate's variables")
        pencil = Pencil.from_json(data["pencil"], reg)
        direction = tuple(parse_rational(c) for c in data["direction"])
        if len(direction) != reg.n:
            raise ValueError("direction has the wrong length")
        return cls(h, q, pencil, direction, data.get("provenance", {}))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        return cls.from_json(json.loads(text))


def _unit_direction(reg: VarRegistry, kind: str) -> tuple:
    return tuple(1 if v.kind == kind else 0 for v in reg.vars)


def matching_certificate(g: Graph, u: int | None = None, quotient: str = "factors") -> Certificate:
    """Path-tree certificate for the matching polynomial.

    Each component is rooted at ``u`` if it contains it, else at its first
    vertex; per-component pencils are direct-summed. ``quotient`` selects how
    the extra factor is obtained: ``"divide"`` (exact division) or
    ``"factors"`` (product of matching polynomials of subgraphs).
    """
    if g.n == 0:
        raise GraphError("empty graph")
    if u is not None and not g.has_vertex(u):
        raise GraphError(f"unknown vertex {u}")
    reg = matching_registry(g)
    pencil = None
    q = MultiPoly.const(reg, 1)
    roots = []
    for comp in g.components():
        root = u if u in comp else comp[0]
        roots.append(root)
        piece = g.induced_subgraph(comp)
        block = tree_pencil(path_tree(piece, root), reg)
        pencil = block if pencil is None else pencil.direct_sum(block)
        if quotient == "divide":
            q = q * path_tree_quotient(piece, root, reg)
        elif quotient == "factors":
            q = q * expand_factors(path_tree_quotient_factors(piece, root, reg), reg)
        else:
            raise ValueError(f"unknown quotient route {quotient!r}")
    h = matching_poly(g, reg)
    return Certificate(h, q, pencil, _unit_direction(reg, "x"), {"kind": "matching", "roots": [g.vertex_label(r) for r in roots]})


def independence_certificate(g: Graph, k) -> Certificate:
    """Clique-tree certificate for the homogeneous independence polynomial of a simplicial graph."""
    k = tuple(k)
    check_simplicial(g, k)
    if not g.is_connected():
        raise GraphError("independence certificates need a connected graph")
    reg = independence_registry(g)
    b = clique_tree(g, k)
    tree = tree_from_line_graph(b)
    t = reg.find("t")
    tg = tree.graph
    pos = {v: i for i, v in enumerate(tg.vertices)}
    delta = line_graph_defect(b, tree)
    d = tg.n + delta
    zero = LinearForm()
    rows = [[zero] * d for _ in range(d)]
    for i in range(d):
        rows[i][i] = LinearForm.of(t)
    for e, (a, c) in tg.edges.items():
        f = LinearForm.of(reg.find("x", b.phi[tree.edge_map[e]]))
        rows[pos[a]][pos[c]] = f
        rows[pos[c]][pos[a]] = f
    pencil = Pencil(reg, rows)
    h = independence_poly_homogeneous(g, reg)
    q = clique_tree_quotient(g, k, reg)
    return Certificate(
        h,
        q,
        pencil,
        _unit_direction(reg, "t"),
        {"kind": "independence", "clique": [g.vertex_label(v) for v in k], "padding": delta},
    )


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class VerificationReport:
    checks: list[CheckResult]
    trials: int
    seed: int
    inclusion: SampleReport | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        out = {
            "passed": self.passed,
            "trials": self.trials,
            "seed": self.seed,
            "checks": [c.to_json() for c in self.checks],
        }
        if self.inclusion is not None:
            out["inclusion"] = self.inclusion.to_json()
        return out


def default_trials(cert: Certificate) -> int:
    return max(100, 2 * (max(cert.q.degree(), 0) + max(cert.h.degree(), 0)))


def verify_certificate(
    cert: Certificate,
    trials: int | None = None,
    seed: int = 0,
    inclusion_samples: int = 100,
    symbolic_bound: int = SYMBOLIC_BOUND,
) -> VerificationReport:
    """Check ``q*h = det(pencil)``, ``pencil(e) > 0`` and cone inclusion of ``h`` into ``q``."""
    reg = cert.registry
    trials = default_trials(cert) if trials is None else trials
    checks: list[CheckResult] = []

    # (a) identity at seeded points, then symbolically when small
    rng = np.random.default_rng(seed)
    ok = True
    for i in range(trials):
        pt = random_point(rng, reg.n)
        lhs = cert.q.evaluate(pt) * cert.h.evaluate(pt)
        rhs = pencil_eval_det(cert.pencil, pt)
        if lhs != rhs:
            checks.append(
                CheckResult(
                    "identity",
                    False,
                    f"q*h != det at trial {i}",
                    {"point": [format_rational(c) for c in pt], "q*h": format_rational(as_rational(lhs)), "det": format_rational(as_rational(rhs))},
                )
            )
            ok = False
            break
    if ok:
        checks.append(CheckResult("identity", True, f"{trials} points"))
        if cert.pencil.dim <= symbolic_bound:
            sym = pencil_symbolic_det(cert.pencil, symbolic_bound)
            same = sym == cert.q * cert.h
            checks.append(CheckResult("identity_symbolic", same, f"dimension {cert.pencil.dim}"))

    # (b) definiteness at the direction
    at_e = cert.pencil.evaluate(cert.direction)
    minors = leading_minors(at_e)
    pd = len(minors) == cert.pencil.dim and all(c > 0 for c in minors)
    witness = None
    if not pd:
        bad = next((i for i, c in enumerate(minors) if c <= 0), len(minors) - 1)
        witness = {"direction": [format_rational(c) for c in cert.direction], "minor_index": bad + 1, "minor": format_rational(minors[bad])}
    checks.append(CheckResult("definite_at_direction", pd, f"{len(minors)} leading minors", witness))

    # (c) sampled cone inclusion
    inclusion = None
    if not cert.h.evaluate(cert.direction):
        checks.append(CheckResult("cone_inclusion", False, "h vanishes at the direction", {"direction": [format_rational(c) for c in cert.direction]}))
    elif not cert.q.evaluate(cert.direction):
        checks.append(CheckResult("cone_inclusion", False, "q vanishes at the direction", {"direction": [format_rational(c) for c in cert.direction]}))
    else:
        inclusion = cone_inclusion_sample_test(cert.h, cert.q, cert.direction, inclusion_samples, seed)
        w = inclusion.failures[0].to_json() if inclusion.failures else None
        checks.append(CheckResult("cone_inclusion", inclusion.passed, f"{inclusion.checked - len(inclusion.failures)}/{inclusion.samples} interior points", w))
    return VerificationReport(checks, trials, seed, inclusion)


# --- tampering for negative controls ----------------------------------------------------


def tamper_zero_entry(cert: Certificate) -> Certificate:
    """Zero the first nonzero off-diagonal entry of the pencil."""
    for i, row in enumerate(cert.pencil.entries):
        for j in range(i + 1, len(row)):
            if row[j].coeffs:
                return replace(cert, pencil=cert.pencil.with_entry(i, j, LinearForm()))
    raise ValueError("pencil has no nonzero off-diagonal entry")


def tamper_zero_direction(cert: Certificate) -> Certificate:
    return replace(cert, direction=tuple(0 for _ in cert.direction))


def tamper_wrong_q(cert: Certificate) -> Certificate:
    """Replace ``q`` by ``q + 1``, keeping everything else."""
    return replace(cert, q=cert.q + 1)
