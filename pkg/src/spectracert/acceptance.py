"""The acceptance corpus: thirteen numbered checks with time budgets.

Each check returns a :class:`CriterionResult`; a check passes only if its
identity holds exactly and it finished inside its budget. Checks never soften
their own targets: when a stated target is wrong, the result fails and the
detail line reports what was actually computed.
"""

from __future__ import annotations

import io
import json
import time
from collections import OrderedDict
from contextlib import redirect_stdout
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, TextIO

import numpy as np

from . import convolution as conv
from . import elemsym
from .graphs import (
    cycle_graph,
    fig1_graph,
    graph_atlas,
    is_claw_free,
    named_graph,
    simplicial_cliques,
    star_graph,
)
from .hyperbolicity import cone_inclusion_sample_test, hyperbolicity_sample_test
from .indeppoly import independence_poly_homogeneous, independence_registry
from .matchpoly import (
    PathTreeEta,
    eta_path_tree_value,
    evaluate_factors,
    heilmann_lieb_poly,
    matching_activities,
    matching_poly,
    matching_registry,
    path_tree_quotient_factors,
    random_activities,
    vertex_registry,
    wagner_by_edge_recurrence,
    wagner_poly,
)
from .pencils import (
    independence_certificate,
    matching_certificate,
    tamper_wrong_q,
    tamper_zero_direction,
    tamper_zero_entry,
    verify_certificate,
)
from .polycore import MultiPoly, exact_divide

SWEEP_TERM_CAP = 3_000_000


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    budget: float = 0.0
    extra: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.title} ({self.seconds:.1f}s / {self.budget:.0f}s): {self.detail}"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
            "budget": self.budget,
        }


def _named_terms(p: MultiPoly) -> dict:
    """Polynomial as ``{frozenset((name, exp)...): coeff}`` so registries can differ."""
    return {frozenset((str(v), e) for v, e in exps.items()): c for exps, c in p.items()}


def _rng_point(rng: np.random.Generator, n: int) -> list[Fraction]:
    return [Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 9))) for _ in range(n)]


# --- individual criteria -------------------------------------------------------------


def fixture_expected_terms() -> dict:
    """The displayed polynomial of the four-vertex example, keyed by variable names."""
    terms = [
        ({"x_1": 1, "x_2": 1, "x_3": 1, "x_4": 1}, 1),
        ({"x_3": 1, "x_4": 1, "w_a": 2}, -1),
        ({"x_1": 1, "x_4": 1, "w_b": 2}, -1),
        ({"x_2": 1, "x_4": 1, "w_c": 2}, -1),
        ({"x_1": 1, "x_2": 1, "w_d": 2}, -1),
        ({"x_2": 1, "x_3": 1, "w_e": 2}, -1),
        ({"w_a": 2, "w_d": 2}, 1),
        ({"w_b": 2, "w_e": 2}, 1),
    ]
    return {frozenset(t.items()): c for t, c in terms}


def criterion_1() -> tuple[bool, str]:
    from .cli import run

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = run(["poly", "matching", "--graph", "@fig1"])
    p = MultiPoly.from_json(json.loads(buf.getvalue())["poly"])
    got = _named_terms(p)
    ok = code == 0 and got == fixture_expected_terms() and len(p) == 8
    return ok, f"{len(p)} terms: {p}"


def criterion_2() -> tuple[bool, str]:
    bad = []
    for n in range(3, 7):
        g = star_graph(n)
        reg = matching_registry(g)
        x = {v.origin: MultiPoly.var(reg, v) for v in reg.of_kind("x")}
        w = {v.origin: MultiPoly.var(reg, v) for v in reg.of_kind("w")}
        expected = MultiPoly.const(reg, 1)
        for i in range(1, n + 2):
            expected = expected * x[i]
        for i in range(1, n + 1):
            term = w[i] * w[i]
            for j in range(1, n + 1):
                if j != i:
                    term = term * x[j]
            expected = expected - term
        if matching_poly(g, reg) != expected:
            bad.append(n)
    return not bad, "closed form matches for n = 3..6" if not bad else f"mismatch for n = {bad}"


def _path_count(g, u) -> int:
    count = 0
    stack = [(u, frozenset([u]))]
    while stack:
        v, seen = stack.pop()
        count += 1
        for c in g.neighbors(v):
            if c not in seen:
                stack.append((c, seen | {c}))
    return count


def criterion_3(budget: float = 300.0) -> tuple[bool, str]:
    """Exact division of every path-tree polynomial by the matching polynomial, cheapest first.

    Stops at the wall budget or when a path-tree polynomial exceeds the term
    cap; every pair is additionally checked at a seeded point against the
    factored quotient (evaluation only, reported but not counted as division).
    """
    start = time.perf_counter()
    graphs = graph_atlas(6, connected=True)
    pairs = sorted(
        ((_path_count(g, u), gi, u) for gi, g in enumerate(graphs) for u in g.vertices),
        key=lambda p: (p[0], p[1], p[2]),
    )
    total = len(pairs)
    rng = np.random.default_rng(0)
    # supplementary: eta = mu * quotient at a seeded point, for every pair
    point_ok = 0
    for _, gi, u in pairs:
        g = graphs[gi]
        reg = matching_registry(g)
        pt = _rng_point(rng, reg.n)
        xs = {v.origin: pt[i] for i, v in enumerate(reg.vars) if v.kind == "x"}
        ws = {v.origin: pt[i] for i, v in enumerate(reg.vars) if v.kind == "w"}
        lhs = eta_path_tree_value(g, u, xs, ws)
        rhs = matching_poly(g, reg).evaluate(pt) * evaluate_factors(path_tree_quotient_factors(g, u, reg), pt)
        point_ok += lhs == rhs
    # the criterion itself: exact symbolic division
    divided = 0
    failures = []
    stop_reason = "all pairs divided"
    cache: OrderedDict[int, tuple] = OrderedDict()
    largest = 0
    for cost, gi, u in pairs:
        if time.perf_counter() - start > budget:
            stop_reason = f"wall budget reached at path-tree size {cost}"
            break
        g = graphs[gi]
        if gi not in cache:
            reg = matching_registry(g)
            cache[gi] = (PathTreeEta(g, reg), matching_poly(g, reg))
            if len(cache) > 4:
                cache.popitem(last=False)
        cache.move_to_end(gi)
        eta_engine, mu = cache[gi]
        try:
            eta = eta_engine.eta(u)
            if len(eta) > SWEEP_TERM_CAP:
                stop_reason = f"path-tree polynomial with {len(eta)} terms exceeds the term cap"
                break
            q = exact_divide(eta, mu, max_terms=SWEEP_TERM_CAP)
        except MemoryError:
            stop_reason = f"term cap reached at path-tree size {cost}"
            break
        if q is None:
            failures.append((gi, u))
        else:
            divided += 1
            largest = max(largest, len(eta))
    ok = divided == total and not failures
    detail = (
        f"{divided}/{total} (graph, root) pairs divided exactly ({stop_reason}; largest dividend {largest} terms); "
        f"{len(failures)} non-divisible; factored quotient agrees at a seeded point for {point_ok}/{total} pairs"
    )
    return ok, detail


CERT_GRAPHS = ["@fig1", "@Cn:4", "@Cn:5", "@Kn:4", "@star:4"]


def criterion_4() -> tuple[bool, str]:
    parts = []
    ok = True
    for name in CERT_GRAPHS:
        g = named_graph(name)
        cert = matching_certificate(g, g.vertices[0])
        rep = verify_certificate(cert, trials=max(100, 2 * (cert.q.degree() + cert.h.degree())), seed=0, inclusion_samples=100)
        at_e = cert.pencil.evaluate(cert.direction)
        identity = all(at_e[i][j] == (1 if i == j else 0) for i in range(len(at_e)) for j in range(len(at_e)))
        inc = rep.inclusion
        passed = rep.passed and identity and inc is not None and inc.checked == 100 and not inc.failures
        ok &= passed
        parts.append(f"{name}:{'ok' if passed else 'FAILED'}(dim {cert.pencil.dim})")
    return ok, ", ".join(parts)


CLAW_FREE_FIXTURES = ["@Pn:3", "@Pn:4", "@Kn:3", "@Kn:4", "@Cn:4", "@Cn:5", "@octahedron"]


def criterion_5() -> tuple[bool, str]:
    polys: list[tuple[str, MultiPoly, tuple]] = []

    def push(label, p):
        reg = p.registry
        e = tuple(1 if v.kind == "x" else 0 for v in reg.vars)
        polys.append((label, p, e))

    push("fig1", matching_poly(fig1_graph()))
    for n in range(3, 7):
        push(f"star{n}", matching_poly(star_graph(n)))
    for gi, g in enumerate(graph_atlas(6, connected=True)):
        push(f"atlas{gi}", matching_poly(g))
    for name in CERT_GRAPHS:
        g = named_graph(name)
        cert = matching_certificate(g, g.vertices[0])
        push(f"q{name}", cert.q)
    for name in CLAW_FREE_FIXTURES:
        g = named_graph(name)
        p = independence_poly_homogeneous(g)
        e = tuple(1 if v.kind == "t" else 0 for v in p.registry.vars)
        polys.append((f"I{name}", p, e))
    bad = []
    for i, (label, p, e) in enumerate(polys):
        rep = hyperbolicity_sample_test(p, e, 50, seed=i)
        if not rep.passed:
            bad.append(label)
    return not bad, f"{len(polys) - len(bad)}/{len(polys)} polynomials real-rooted on 50 seeded lines" + (f"; failing {bad}" if bad else "")


def criterion_6() -> tuple[bool, str]:
    graphs = graph_atlas(5)
    bad = []
    for gi, g in enumerate(graphs):
        expected, mu = conv.godsil_gutman(g)
        if expected != mu:
            bad.append(gi)
    return not bad, f"{len(graphs) - len(bad)}/{len(graphs)} graphs on at most 5 vertices"


def criterion_7() -> tuple[bool, str]:
    rows = []
    ok = True
    for n in (2, 3, 4):
        brute = conv.kn_double_signing(n)
        stated = conv.kn_three_halves(n)
        ok &= brute == stated
        rows.append(f"n={n}: enumeration {brute} vs stated {stated}")
    note = "; enumeration equals the split binomial sum" if all(
        conv.kn_double_signing(n) == conv.kn_split_sum(n) for n in (2, 3, 4)
    ) else ""
    return ok, "; ".join(rows) + note


def criterion_8() -> tuple[bool, str]:
    ok = True
    for n in (2, 3):
        brute = conv.signing_expectation(n=n)
        ok &= brute == conv.boxplus_closed_form(n) and brute == conv.boxplus_subset_form(n)
    return ok, "enumeration = subset form = matching form for n = 2, 3" if ok else "mismatch"


ELEM_GRID = [(2, 1), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2), (5, 3)]


def criterion_9() -> tuple[bool, str]:
    parts = []
    ok = True
    for n, k in ELEM_GRID:
        cert = elemsym.elemsym_certificate(n, k)
        rep = verify_certificate(cert, seed=0)
        ok &= rep.passed
        parts.append(f"({n},{k}){'ok' if rep.passed else 'FAILED'}")
    # two closed forms against the enumeration oracle
    reg3 = elemsym.elem_registry(3)
    x3 = {i: MultiPoly.var(reg3, reg3.find("x", i)) for i in range(1, 4)}
    m32 = elemsym.elem_M_tree(3, 2, method="enumeration")
    f32 = (x3[1] + x3[2]).scale(2) * elemsym.elem_poly(range(1, 4), 2, reg3)
    reg4 = elemsym.elem_registry(4)
    e1 = lambda s: elemsym.elem_poly(s, 1, reg4)  # noqa: E731
    f43 = elemsym.elem_poly([1, 2, 3], 2, reg4) ** 2 * e1([2, 3]) * e1([1, 3]) * e1([1, 2]) * elemsym.elem_poly(range(1, 5), 3, reg4)
    f43 = f43.scale(12)
    m43 = elemsym.elem_M_tree(4, 3, method="enumeration")
    forms = m32 == f32 and m43 == f43
    ok &= forms
    return ok, " ".join(parts) + f"; closed forms {'reproduced' if forms else 'NOT reproduced'} by enumeration"


INDEP_FIXTURES = ["@Pn:3", "@Pn:4", "@Kn:3", "@Kn:4", "@octahedron"]


def criterion_10() -> tuple[bool, str]:
    parts = []
    ok = True
    for name in INDEP_FIXTURES:
        g = named_graph(name)
        k = simplicial_cliques(g)[0]
        cert = independence_certificate(g, k)
        rep = verify_certificate(cert, seed=0)
        at_e = cert.pencil.evaluate(cert.direction)
        identity = all(at_e[i][j] == (1 if i == j else 0) for i in range(len(at_e)) for j in range(len(at_e)))
        passed = rep.passed and identity
        ok &= passed
        parts.append(f"{name}:{'ok' if passed else 'FAILED'}")
    return ok, ", ".join(parts)


def criterion_11() -> tuple[bool, str]:
    bad = []
    count = 0
    for name in CLAW_FREE_FIXTURES:
        g = named_graph(name)
        if not is_claw_free(g):
            continue
        reg = independence_registry(g)
        whole = independence_poly_homogeneous(g, reg)
        e = tuple(1 if v.kind == "t" else 0 for v in reg.vars)
        for v in g.vertices:
            smaller = independence_poly_homogeneous(g.delete_vertex(v), reg)
            rep = cone_inclusion_sample_test(whole, smaller, e, 100, seed=v)
            count += 1
            if not rep.passed:
                bad.append(f"{name}-{g.vertex_label(v)}")
    return not bad, f"{count - len(bad)}/{count} vertex deletions keep 100/100 interior points" + (f"; failing {bad}" if bad else "")


def criterion_12() -> tuple[bool, str]:
    graphs = graph_atlas(5)
    rng = np.random.default_rng(0)
    recurrence_ok = True
    for g in graphs:
        reg = matching_registry(g)
        for _ in range(5):
            acts = random_activities(g, rng)
            if wagner_poly(g, acts, reg) != wagner_by_edge_recurrence(g, acts, reg):
                recurrence_ok = False
    literal_bad = 0
    scaled_ok = True
    hl_ok = True
    for g in graphs:
        reg = matching_registry(g)
        w = wagner_poly(g, matching_activities(g), reg)
        mu = matching_poly(g, reg)
        if w != mu:
            literal_bad += 1
        # W(1,1,0,...) = prod_v x_v^(deg v - 1) * mu once isolated vertices are cleared
        scale = MultiPoly.const(reg, 1)
        for v in g.vertices:
            if g.degree(v) > 1:
                scale = scale * MultiPoly.var(reg, reg.find("x", v), g.degree(v) - 1)
        lhs = w
        for v in g.vertices:
            if g.degree(v) == 0:
                lhs = lhs * MultiPoly.var(reg, reg.find("x", v))
        scaled_ok &= lhs == scale * mu
        # the inhomogeneous form at unit edge weights is the Heilmann-Lieb polynomial
        hl_ok &= _wagner_inhomogeneous(g) == heilmann_lieb_poly(g, None, vertex_registry(g))
    ok = recurrence_ok and literal_bad == 0
    detail = (
        f"edge recurrence {'holds' if recurrence_ok else 'FAILS'} on {len(graphs)} graphs x 5 activity vectors; "
        f"(1,1,0,...) specialization equals mu on {len(graphs) - literal_bad}/{len(graphs)} graphs; "
        f"equals prod x_v^(deg-1) * mu on all: {scaled_ok}; inhomogeneous form equals Heilmann-Lieb: {hl_ok}"
    )
    return ok, detail


def _wagner_inhomogeneous(g) -> MultiPoly:
    """``sum_H (-1)^|H| u_{deg_H} x^{deg_H}`` at unit edge weights and matching activities."""
    import itertools

    reg = vertex_registry(g)
    x = {v: MultiPoly.var(reg, reg.find("x", v)) for v in g.vertices}
    acts = matching_activities(g)
    total = MultiPoly.zero(reg)
    eids = list(g.edges)
    for r in range(len(eids) + 1):
        for h in itertools.combinations(eids, r):
            deg = {v: 0 for v in g.vertices}
            for e in h:
                a, b = g.edges[e]
                deg[a] += 1
                deg[b] += 1
            coeff = 1
            for v in g.vertices:
                seq = acts[v]
                coeff *= seq[deg[v]] if deg[v] < len(seq) else 0
            if not coeff:
                continue
            term = MultiPoly.const(reg, (-1) ** r * coeff)
            for v, d in deg.items():
                if d:
                    term = term * x[v] ** d
            total = total + term
    return total


def criterion_13() -> tuple[bool, str]:
    g = cycle_graph(4)
    cert = matching_certificate(g, g.vertices[0])
    parts = []
    ok = True
    for label, tamper in (("zero entry", tamper_zero_entry), ("zero direction", tamper_zero_direction), ("wrong q", tamper_wrong_q)):
        rep = verify_certificate(tamper(cert), seed=0, inclusion_samples=20)
        failed = rep.failed()
        has_witness = any(c.witness for c in failed)
        rejected = not rep.passed and has_witness
        ok &= rejected
        parts.append(f"{label}: {'rejected by ' + failed[0].name if rejected else 'NOT rejected with witness'}")
    return ok, "; ".join(parts)


CRITERIA: dict[int, tuple[str, float, Callable[[], tuple[bool, str]]]] = {
    1: ("named four-vertex fixture matching polynomial", 1, criterion_1),
    2: ("star graph closed form", 1, criterion_2),
    3: ("path-tree divisibility, connected graphs <= 6 vertices", 300, criterion_3),
    4: ("matching certificates verify", 120, criterion_4),
    5: ("hyperbolicity sampling", 120, criterion_5),
    6: ("Godsil-Gutman expected characteristic polynomial", 120, criterion_6),
    7: ("K_n double signing against the (3/2)^k formula", 60, criterion_7),
    8: ("boxplus identity", 60, criterion_8),
    9: ("elementary symmetric certificates", 180, criterion_9),
    10: ("independence certificates", 180, criterion_10),
    11: ("deletion keeps cone inclusion", 120, criterion_11),
    12: ("Wagner recurrence and matching specialization", 120, criterion_12),
    13: ("tampered certificates rejected with witness", 10, criterion_13),
}


def run_criterion(number: int) -> CriterionResult:
    title, budget, fn = CRITERIA[number]
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure with its message as the detail
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - start
    if ok and seconds > budget:
        ok = False
        detail += f"; over the {budget:.0f}s budget"
    return CriterionResult(number, title, ok, detail, seconds, budget)


def run_all(criteria: list[int] | None = None, stream: TextIO | None = None) -> list[CriterionResult]:
    out = []
    for number in criteria or sorted(CRITERIA):
        res = run_criterion(number)
        if stream is not None:
            print(res.line(), file=stream, flush=True)
        out.append(res)
    return out
