import io
import json
import subprocess
import sys

import pytest

from diffhopf.cli import run
from diffhopf.serialize import load_file


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, json.loads(out.getvalue()), out.getvalue()


def test_check_hopf_builtin_passes():
    code, rep, _ = invoke("check-hopf", "--builtin", "gm")
    assert code == 0 and rep["status"] == "pass"


def test_orbit_prints_dimension_and_matrix():
    code, rep, _ = invoke("orbit", "--builtin", "gm", "--element", "d(y)/y")
    assert code == 0
    assert rep["data"]["dim"] == 2
    assert rep["data"]["matrix_text"] == "[[1, 0], [d(y)/y, 1]]"


def test_broken_comodule_exits_one(fixtures_dir):
    code, rep, _ = invoke("check-comodule", str(fixtures_dir / "broken.json"))
    assert code == 1
    assert {"i": 2, "j": 2}.items() <= rep["witnesses"][0].items()


def test_negative_hopf_fixtures_exit_one(fixtures_dir):
    for name in ("ga_bad_antipode.json", "ga_literal_antipode.json"):
        code, rep, _ = invoke("check-hopf", str(fixtures_dir / name))
        assert code == 1 and rep["witnesses"]


@pytest.mark.parametrize("argv", [
    ("check-comodule", "missing.json"),
    ("orbit", "--builtin", "gm", "--element", "1/(y+1)"),
    ("orbit", "--builtin", "gm", "--element", "d(y"),
    ("check-hopf", "--builtin", "so3"),
    ("build-L", "-n", "4", "-p", "1"),
    ("frobnicate",),
    ("prolong", "--builtin", "gm", "-p", "x"),
])
def test_input_errors_exit_two(argv):
    code, rep, _ = invoke(*argv)
    assert code == 2
    assert rep["status"] == "error" and rep["code"]


def test_malformed_file_exits_two(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"hopf": "gm", "dim": 2, "matrix": [["1"]]}', encoding="utf-8")
    code, rep, _ = invoke("check-comodule", str(path))
    assert code == 2 and rep["code"] == "FormatError"
    assert "$.matrix" in rep["message"]


def test_every_subcommand(fixtures_dir, tmp_path):
    U = str(fixtures_dir / "gm_unipotent.json")
    out = tmp_path / "p.json"
    cases = [
        (("check-morphism", str(fixtures_dir / "rho_star.json")), 0),
        (("prolong", U, "-p", "2", "-o", str(out)), 0),
        (("combine", "tensor", U, U), 0),
        (("combine", "det-twist", "--builtin", "gl2", "-r", "2"), 0),
        (("combine", "pushforward", "--builtin", "gl2", "--morphism", str(fixtures_dir / "rho_star.json")), 0),
        (("hom", U, U), 0),
        (("coordinate-rep", "--builtin", "gm", "--element", "d(y)/y"), 0),
        (("const-split", "--builtin", "gm-constant", "-p", "1", "--seed", "3"), 0),
        (("const-split", "--builtin", "gm", "--field", "Q(t)", "-p", "1"), 1),
        (("regular-embed", U), 0),
        (("build-L", "-n", "2", "-s", "1", "-p", "1"), 0),
        (("reconstruct-check", "--builtin", "gm", "--samples", "20", "--prolong", "1"), 0),
    ]
    for argv, want in cases:
        code, rep, _ = invoke(*argv)
        assert code == want, (argv, rep)
    assert load_file(out).dim == 6


def test_hom_reports_derived_basis(fixtures_dir):
    U = str(fixtures_dir / "gm_unipotent.json")
    _, rep, _ = invoke("hom", U, U)
    assert rep["data"]["dim"] == 2
    assert sorted(rep["data"]["basis"]) == [[["0", "1"], ["0", "0"]], [["1", "0"], ["0", "1"]]]


def test_regular_embed_text(fixtures_dir):
    _, rep, _ = invoke("regular-embed", str(fixtures_dir / "gm_unipotent.json"))
    assert "ρ(u2) = u1 ⊗ (d(y)/y) + u2 ⊗ 1" in rep["data"]["rho"]


def test_output_is_deterministic(fixtures_dir):
    argv = ("const-split", "--builtin", "gl2-constant", "-p", "1", "--seed", "9")
    assert invoke(*argv)[2] == invoke(*argv)[2]
    argv = ("reconstruct-check", str(fixtures_dir / "gm_registry.json"), "--samples", "10")
    assert invoke(*argv)[2] == invoke(*argv)[2]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diffhopf.cli", "check-hopf", "--builtin", "ga"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "pass"
