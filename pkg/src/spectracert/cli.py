"""Command line front door: ``spectracert <group> <action> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 theorem violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import convolution as conv
from . import elemsym, hyperbolicity as hyp, indeppoly, matchpoly, pencils
from .graphs import Graph, GraphError, graph_from_json, named_graph
from .matchpoly import TheoremViolation
from .polycore import MultiPoly, format_rational, parse_rational
from .trees import clique_tree, path_tree, truncated_path_tree

FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_VIOLATION = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- input helpers ---------------------------------------------------------------------


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def load_graph(ref: str) -> Graph:
    if ref.startswith("@"):
        return named_graph(ref)
    return graph_from_json(_read_json(ref))


def load_poly(ref: str) -> MultiPoly:
    data = _read_json(ref)
    return MultiPoly.from_json(data.get("poly", data) if "terms" not in data else data)


def parse_vector(text: str) -> list:
    try:
        return [parse_rational(s.strip()) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"bad vector {text!r}: {exc}") from exc


def _by_vertex_label(g: Graph, mapping: dict) -> dict:
    inv = {g.vertex_label(v): v for v in g.vertices}
    try:
        return {inv[str(k)]: v for k, v in mapping.items()}
    except KeyError as exc:
        raise UsageError(f"unknown vertex label {exc.args[0]!r}") from exc


def _by_edge_label(g: Graph, mapping: dict) -> dict:
    inv = {g.edge_label(e): e for e in g.edges}
    try:
        return {inv[str(k)]: v for k, v in mapping.items()}
    except KeyError as exc:
        raise UsageError(f"unknown edge label {exc.args[0]!r}") from exc


def _clique(g: Graph, text: str | None) -> tuple[int, ...]:
    if not text:
        from .graphs import simplicial_cliques

        found = simplicial_cliques(g)
        if not found:
            raise GraphError("graph has no simplicial clique")
        return found[0]
    inv = {g.vertex_label(v): v for v in g.vertices}
    try:
        return tuple(inv[s.strip()] for s in text.split(","))
    except KeyError as exc:
        raise UsageError(f"unknown vertex label {exc.args[0]!r}") from exc


def _root(g: Graph, label: str | None) -> int | None:
    if label is None:
        return None
    inv = {g.vertex_label(v): v for v in g.vertices}
    if label not in inv:
        raise UsageError(f"unknown vertex label {label!r}")
    return inv[label]


def _uni_json(u) -> list[str]:
    return [format_rational(c) for c in u.coeffs]


# --- command handlers -----------------------------------------------------------------
# each returns (payload, exit code)


def cmd_poly(a):
    if a.action == "elem-M":
        if a.n is None or a.k is None:
            raise UsageError("elem-M needs --n and --k")
        m = elemsym.elem_M(a.n, a.k, a.truncation)
        return {"kind": "elem-M", "n": a.n, "k": a.k, "poly": m.to_json(), "text": str(m)}, EXIT_OK
    if a.action == "elem":
        if a.n is None or a.k is None:
            raise UsageError("elem needs --n and --k")
        p = elemsym.elem_poly(range(1, a.n + 1), a.k, elemsym.elem_registry(a.n))
        return {"kind": "elem", "n": a.n, "k": a.k, "poly": p.to_json(), "text": str(p)}, EXIT_OK
    if not a.graph:
        raise UsageError(f"poly {a.action} needs --graph")
    g = load_graph(a.graph)
    if a.action == "matching":
        p = matchpoly.matching_poly(g)
    elif a.action == "matching-univariate":
        u = matchpoly.matching_poly_univariate(g)
        return {"kind": a.action, "coeffs": _uni_json(u), "text": str(u)}, EXIT_OK
    elif a.action == "heilmann-lieb":
        weights = _by_edge_label(g, _read_json(a.weights)) if a.weights else None
        weights = {k: parse_rational(str(v)) for k, v in weights.items()} if weights else None
        p = matchpoly.heilmann_lieb_poly(g, weights)
    elif a.action == "wagner":
        if not a.activities:
            acts = matchpoly.matching_activities(g)
        else:
            raw = _by_vertex_label(g, _read_json(a.activities))
            acts = {v: tuple(parse_rational(str(c)) for c in seq) for v, seq in raw.items()}
        p = matchpoly.wagner_poly(g, acts)
    elif a.action == "independence":
        p = indeppoly.independence_poly(g)
    elif a.action == "independence-homogeneous":
        p = indeppoly.independence_poly_homogeneous(g)
    elif a.action == "independence-weighted":
        weights = _by_vertex_label(g, _read_json(a.weights)) if a.weights else None
        weights = {k: parse_rational(str(v)) for k, v in weights.items()} if weights else None
        u = indeppoly.weighted_independence_univariate(g, weights)
        return {"kind": a.action, "coeffs": _uni_json(u), "text": str(u)}, EXIT_OK
    elif a.action == "clique-quotient":
        p = indeppoly.clique_tree_quotient(g, _clique(g, a.clique))
    else:
        raise UsageError(f"unknown poly action {a.action!r}")
    return {"kind": a.action, "poly": p.to_json(), "text": str(p)}, EXIT_OK


def cmd_tree(a):
    if a.action == "truncated":
        if a.n is None or a.k is None:
            raise UsageError("truncated needs --n and --k")
        return {"kind": "truncated-path-tree", "tree": truncated_path_tree(a.n, a.k, a.truncation).to_json()}, EXIT_OK
    if not a.graph:
        raise UsageError(f"tree {a.action} needs --graph")
    g = load_graph(a.graph)
    if a.action == "path":
        u = _root(g, a.root)
        return {"kind": "path-tree", "tree": path_tree(g, u if u is not None else g.vertices[0]).to_json()}, EXIT_OK
    if a.action == "clique":
        return {"kind": "clique-tree", "tree": clique_tree(g, _clique(g, a.clique)).to_json()}, EXIT_OK
    raise UsageError(f"unknown tree action {a.action!r}")


def cmd_cert(a):
    if a.action == "elemsym":
        if a.n is None or a.k is None:
            raise UsageError("cert elemsym needs --n and --k")
        cert = elemsym.elemsym_certificate(a.n, a.k, a.truncation)
    else:
        if not a.graph:
            raise UsageError(f"cert {a.action} needs --graph")
        g = load_graph(a.graph)
        if a.action == "matching":
            cert = pencils.matching_certificate(g, _root(g, a.root), quotient=a.quotient)
        elif a.action == "independence":
            cert = pencils.independence_certificate(g, _clique(g, a.clique))
        else:
            raise UsageError(f"unknown cert action {a.action!r}")
    return {"kind": "certificate", "certificate": cert.to_json()}, EXIT_OK


def cmd_verify(a):
    data = _read_json(a.cert)
    cert = pencils.Certificate.from_json(data.get("certificate", data))
    rep = pencils.verify_certificate(cert, trials=a.trials, seed=a.seed, inclusion_samples=a.samples)
    return {"kind": "verification", "report": rep.to_json()}, EXIT_OK if rep.passed else EXIT_FAILED


def cmd_hyperbolic(a):
    h = load_poly(a.poly)
    e = parse_vector(a.direction)
    if a.action == "eigen":
        pt = _need_point(a)
        ev = hyp.eigenvalues(h, e, pt)
        return {
            "kind": "eigenvalues",
            "roots": [
                {"lo": format_rational(r.lo), "hi": format_rational(r.hi), "multiplicity": r.multiplicity}
                for r in ev.roots
            ],
        }, EXIT_OK
    if a.action == "member":
        m = hyp.cone_membership(h, e, _need_point(a))
        return {"kind": "membership", "status": m.status}, EXIT_OK
    if a.action == "sample":
        rep = hyp.hyperbolicity_sample_test(h, e, a.n or 50, a.seed)
    elif a.action == "inclusion":
        if not a.outer:
            raise UsageError("inclusion needs --outer")
        rep = hyp.cone_inclusion_sample_test(h, load_poly(a.outer), e, a.n or 100, a.seed)
    else:
        raise UsageError(f"unknown hyperbolic action {a.action!r}")
    return {"kind": a.action, "report": rep.to_json()}, EXIT_OK if rep.passed else EXIT_FAILED


def _need_point(a):
    if not a.point:
        raise UsageError(f"{a.action} needs --point")
    return parse_vector(a.point)


def cmd_conv(a):
    if a.action == "expected-charpoly":
        if not a.matrix:
            raise UsageError("expected-charpoly needs --matrix")
        mat = [[parse_rational(str(c)) for c in row] for row in _read_json(a.matrix)]
        u = conv.expected_char_poly(mat, parse_vector(a.weights), diagonal_adjustment=a.diagonal_adjustment)
        return {"kind": a.action, "coeffs": _uni_json(u), "text": str(u)}, EXIT_OK
    if a.action == "godsil-gutman":
        if not a.graph:
            raise UsageError("godsil-gutman needs --graph")
        expected, mu = conv.godsil_gutman(load_graph(a.graph))
        out = {"kind": a.action, "expected": _uni_json(expected), "matching": _uni_json(mu), "equal": expected == mu}
        return out, EXIT_OK if expected == mu else EXIT_FAILED
    if a.n is None:
        raise UsageError(f"conv {a.action} needs --n")
    if a.action == "boxplus":
        brute = conv.signing_expectation(n=a.n)
        closed = conv.boxplus_closed_form(a.n)
        subset = conv.boxplus_subset_form(a.n)
        ok = brute == closed == subset
        return {"kind": a.action, "n": a.n, "poly": brute.to_json(), "text": str(brute), "closed_form_equal": brute == closed, "subset_form_equal": brute == subset}, EXIT_OK if ok else EXIT_FAILED
    if a.action == "kn":
        u = conv.kn_double_signing(a.n)
        return {
            "kind": a.action,
            "n": a.n,
            "coeffs": _uni_json(u),
            "text": str(u),
            "split_sum": _uni_json(conv.kn_split_sum(a.n)),
            "three_halves_formula": _uni_json(conv.kn_three_halves(a.n)),
        }, EXIT_OK
    if a.action == "sample":
        rep = conv.conv_hyperbolicity_sample(a.n, parse_vector(a.weights), a.trials or 50, a.seed)
        return {"kind": a.action, "report": rep.to_json()}, EXIT_OK if rep.passed else EXIT_FAILED
    raise UsageError(f"unknown conv action {a.action!r}")


def cmd_suite(a):
    from .acceptance import run_all

    results = run_all(criteria=a.only, stream=sys.stderr)
    rows = [r.to_json() for r in results]
    return {"kind": "acceptance", "results": rows, "passed": all(r.passed for r in results)}, (
        EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    )


# --- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--format", choices=["json"], default="json")
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="spectracert", description="Spectrahedral certificates for graph and symmetric polynomials.")
    sub = p.add_subparsers(dest="group", required=True)

    sp = sub.add_parser("poly", parents=[common], help="build polynomials")
    sp.add_argument(
        "action",
        choices=[
            "matching",
            "matching-univariate",
            "heilmann-lieb",
            "wagner",
            "independence",
            "independence-homogeneous",
            "independence-weighted",
            "clique-quotient",
            "elem",
            "elem-M",
        ],
    )
    sp.add_argument("--graph")
    sp.add_argument("--weights", help="JSON object label -> rational")
    sp.add_argument("--activities", help="JSON object vertex label -> list of rationals")
    sp.add_argument("--clique", help="comma separated vertex labels")
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--truncation", choices=["vertices", "edges"], default="vertices")
    sp.set_defaults(func=cmd_poly)

    sp = sub.add_parser("tree", parents=[common], help="path trees and clique trees")
    sp.add_argument("action", choices=["path", "clique", "truncated"])
    sp.add_argument("--graph")
    sp.add_argument("--root", help="vertex label")
    sp.add_argument("--clique")
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--truncation", choices=["vertices", "edges"], default="vertices")
    sp.set_defaults(func=cmd_tree)

    sp = sub.add_parser("cert", parents=[common], help="build a certificate bundle")
    sp.add_argument("action", choices=["matching", "independence", "elemsym"])
    sp.add_argument("--graph")
    sp.add_argument("--root", help="vertex label")
    sp.add_argument("--clique")
    sp.add_argument("--quotient", choices=["factors", "divide"], default="factors")
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--truncation", choices=["vertices", "edges"], default="vertices")
    sp.set_defaults(func=cmd_cert)

    sp = sub.add_parser("verify", parents=[common], help="verify a certificate bundle")
    sp.add_argument("--cert", required=True)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--samples", type=int, default=100, help="cone-inclusion samples")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("hyperbolic", parents=[common], help="eigenvalues, membership and sampling")
    sp.add_argument("action", choices=["eigen", "member", "sample", "inclusion"])
    sp.add_argument("--poly", required=True)
    sp.add_argument("--direction", required=True, help="comma separated rationals")
    sp.add_argument("--point")
    sp.add_argument("--outer", help="polynomial file for inclusion")
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=cmd_hyperbolic)

    sp = sub.add_parser("conv", parents=[common], help="signings and convolutions")
    sp.add_argument("action", choices=["expected-charpoly", "godsil-gutman", "boxplus", "kn", "sample"])
    sp.add_argument("--matrix", help="JSON list of rows")
    sp.add_argument("--graph")
    sp.add_argument("--weights", default="1,-1")
    sp.add_argument("--diagonal-adjustment", action="store_true")
    sp.add_argument("--n", type=int)
    sp.add_argument("--trials", type=int)
    sp.set_defaults(func=cmd_conv)

    sp = sub.add_parser("suite", parents=[common], help="run the acceptance criteria")
    sp.add_argument("action", choices=["acceptance"])
    sp.add_argument("--only", type=int, action="append", help="criterion number (repeatable)")
    sp.set_defaults(func=cmd_suite)
    return p


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps({"format_version": FORMAT_VERSION, **payload}, indent=2, sort_keys=False) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        payload, code = a.func(a)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TheoremViolation as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        _emit({"kind": "theorem-violation", "message": str(exc)}, getattr(a, "out", None))
        return EXIT_VIOLATION
    except (GraphError, ValueError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(payload, a.out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
