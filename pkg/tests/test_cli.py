import json
import subprocess
import sys

import pytest

from spectracert.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, run


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.err


def test_matching_univariate(capsys):
    code, data, _ = _run(capsys, "poly", "matching-univariate", "--graph", "@Kn:4")
    assert code == EXIT_OK
    assert data["format_version"] == 1
    assert data["coeffs"] == ["3", "0", "-6", "0", "1"]


def test_graph_file_and_weights(tmp_path, capsys):
    gfile = tmp_path / "g.json"
    gfile.write_text(json.dumps({"vertices": ["a", "b", "c"], "edges": [{"id": "ab", "ends": ["a", "b"]}, {"id": "bc", "ends": ["b", "c"]}]}))
    wfile = tmp_path / "w.json"
    wfile.write_text(json.dumps({"a": "2", "c": "5"}))
    code, data, _ = _run(capsys, "poly", "independence-weighted", "--graph", str(gfile), "--weights", str(wfile))
    assert code == EXIT_OK and data["coeffs"] == ["1", "8", "10"]


def test_certificate_round_trip(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, _, _ = _run(capsys, "cert", "matching", "--graph", "@fig1", "--root", "2", "--out", str(cert))
    assert code == EXIT_OK
    code, data, _ = _run(capsys, "verify", "--cert", str(cert), "--trials", "10", "--samples", "10")
    assert code == EXIT_OK and data["report"]["passed"]

    bundle = json.loads(cert.read_text())
    bundle["certificate"]["q"]["terms"][0]["coeff"] = "12345"
    cert.write_text(json.dumps(bundle))
    code, data, _ = _run(capsys, "verify", "--cert", str(cert), "--trials", "10", "--samples", "10")
    assert code == EXIT_FAILED
    failed = [c for c in data["report"]["checks"] if not c["passed"]]
    assert failed[0]["name"] == "identity" and "point" in failed[0]["witness"]


def test_elemsym_and_independence_certificates(tmp_path, capsys):
    for argv in (["cert", "elemsym", "--n", "3", "--k", "2"], ["cert", "independence", "--graph", "@Pn:4"]):
        cert = tmp_path / "c.json"
        assert run([*argv, "--out", str(cert)]) == EXIT_OK
        code, _, _ = _run(capsys, "verify", "--cert", str(cert), "--trials", "5", "--samples", "5")
        assert code == EXIT_OK


def test_same_seed_same_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(["conv", "sample", "--n", "2", "--trials", "5", "--seed", "7", "--out", str(out)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_hyperbolic_commands(tmp_path, capsys):
    code, data, _ = _run(capsys, "poly", "matching", "--graph", "@Pn:2", "--out", str(tmp_path / "p.json"))
    assert code == EXIT_OK
    poly = str(tmp_path / "p.json")
    # variables are x_1, x_2, w_0; the polynomial is x_1 x_2 - w_0^2
    code, data, _ = _run(capsys, "hyperbolic", "member", "--poly", poly, "--direction", "1,1,0", "--point", "2,3,1")
    assert data["status"] == "interior"
    code, data, _ = _run(capsys, "hyperbolic", "eigen", "--poly", poly, "--direction", "1,1,0", "--point", "0,0,1")
    assert [r["multiplicity"] for r in data["roots"]] == [1, 1]
    code, data, _ = _run(capsys, "hyperbolic", "sample", "--poly", poly, "--direction", "1,1,0", "--n", "10")
    assert code == EXIT_OK


def test_conv_commands(capsys):
    code, data, _ = _run(capsys, "conv", "kn", "--n", "3")
    assert data["coeffs"] == ["0", "-6", "0", "1"] and data["split_sum"] == data["coeffs"]
    code, data, _ = _run(capsys, "conv", "godsil-gutman", "--graph", "@Cn:5")
    assert code == EXIT_OK and data["equal"]
    code, data, _ = _run(capsys, "conv", "boxplus", "--n", "2")
    assert code == EXIT_OK and data["closed_form_equal"] and data["subset_form_equal"]


def test_tree_commands(capsys):
    code, data, _ = _run(capsys, "tree", "path", "--graph", "@fig1", "--root", "1")
    assert code == EXIT_OK and len(data["tree"]["vertices"]) == 10
    code, data, _ = _run(capsys, "tree", "truncated", "--n", "4", "--k", "3")
    assert code == EXIT_OK and len(data["tree"]["vertices"]) == 10


@pytest.mark.parametrize(
    "argv",
    [
        ["poly", "matching"],
        ["poly", "matching", "--graph", "@nosuch"],
        ["poly", "bogus", "--graph", "@fig1"],
        ["tree", "path", "--graph", "@fig1", "--root", "zz"],
        ["hyperbolic", "member", "--poly", "/does/not/exist", "--direction", "1"],
        ["cert", "independence", "--graph", "@star:3"],
        ["conv", "kn"],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(argv) == EXIT_USAGE
    assert "usage error" in capsys.readouterr().err


def test_violation_exit_code(monkeypatch, capsys):
    import spectracert.cli as cli
    from spectracert.matchpoly import TheoremViolation

    def boom(*args, **kwargs):
        raise TheoremViolation("forced")

    monkeypatch.setattr(cli.matchpoly, "matching_poly", boom)
    code, data, _ = _run(capsys, "poly", "matching", "--graph", "@Pn:2")
    assert code == EXIT_VIOLATION and data["kind"] == "theorem-violation"


def test_console_script_module():
    proc = subprocess.run(
        [sys.executable, "-m", "spectracert.cli", "poly", "elem", "--n", "3", "--k", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["text"].count("x_") == 6
