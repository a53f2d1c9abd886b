import json

import pytest

from diffhopf.comodule import Comodule, check_comodule, prolong, standard_comodule
from diffhopf.hopf import HopfPresentation, builtin, check_hopf_axioms
from diffhopf.report import Report
from diffhopf.scalar import QT
from diffhopf.serialize import ENV_PATH, FormatError, RegistryManifest, load, load_file, serialize
from test_comodule import unipotent


def test_fixtures_round_trip_byte_identical(fixtures_dir):
    paths = sorted(fixtures_dir.glob("*.json"))
    assert len(paths) >= 7
    for path in paths:
        text = path.read_text(encoding="utf-8")
        assert serialize(load_file(path)) == text, path.name
        assert text.endswith("}\n")


@pytest.mark.parametrize("name", ["gm", "ga", "gl2", "gl3", "gm-constant", "trivial"])
def test_builtin_presentations_round_trip(name):
    text = serialize(builtin(name))
    again = load(text)
    assert isinstance(again, HopfPresentation)
    assert serialize(again) == text
    assert check_hopf_axioms(again, 1).passed


def test_time_field_round_trip():
    A = builtin("gm", field=QT)
    V = Comodule(A, [[A.one(), A.gen("y", 1) * A.ring(1).den_inverse(0)], [A.zero(), A.one()]])
    text = serialize(V)
    assert json.loads(text)["field"] == "Q(t)"
    assert serialize(load(text)) == text


def test_prolongation_pipeline():
    text = serialize(prolong(unipotent(), 1))
    back = load(text)
    assert check_comodule(back).passed
    assert back.same_matrix(prolong(unipotent(), 1))


def test_reports_round_trip():
    rep = Report("check-comodule", data={"dim": 2}).fail(identity="counit", i=1, j=2, lhs="0", rhs="1")
    text = serialize(rep)
    again = load(text)
    assert again.to_dict() == rep.to_dict()


def test_manifest_loads_registry(fixtures_dir):
    man = load_file(fixtures_dir / "gm_registry.json")
    assert isinstance(man, RegistryManifest)
    assert "V^(1)" in man.registry.names()


def test_references_resolve_through_search_path(tmp_path, fixtures_dir, monkeypatch):
    ref = {"name": "W", "hopf": "ga_bad_antipode.json", "dim": 1, "basis": ["w"], "matrix": [["1"]]}
    path = tmp_path / "w.json"
    path.write_text(json.dumps(ref), encoding="utf-8")
    with pytest.raises(FormatError):
        load_file(path)
    monkeypatch.setenv(ENV_PATH, str(fixtures_dir))
    W = load_file(path)
    assert W.hopf.name == "GaBadAntipode"
    assert json.loads(serialize(W))["hopf"] == "ga_bad_antipode.json"
    assert load_file("gm_unipotent.json").name == "U"


@pytest.mark.parametrize("text,where", [
    ('{"hopf": "gm", "dim": 2, "matrix": [["1", "0"]]}', "$.matrix"),
    ('{"hopf": "gm", "dim": 1, "matrix": [["1/(y+1)"]]}', "$.matrix[0][0]"),
    ('{"hopf": "nope", "dim": 1, "matrix": [["1"]]}', "$.hopf"),
    ('{"generators": ["y"], "delta": {"y": "tensor(y, y)"}, "counit": {"z": "1"}}', "$.counit"),
    ('{"generators": ["y"], "delta": {"y": "tensor(y, y)"}, "antipode": {"y": "1/y"}, "counit": {"y": "1"}}',
     "$.antipode.y"),
    ('{"hopf": "gm", "dim": 1', "<text>:1:"),
    ('[1, 2]', "$"),
    ('{"what": 1}', "$"),
])
def test_malformed_input_reports_location(text, where):
    with pytest.raises(FormatError) as err:
        load(text)
    assert err.value.location.startswith(where)


def test_standard_comodule_names_builtin():
    data = json.loads(serialize(standard_comodule(builtin("gl2"))))
    assert data["hopf"] == "gl2" and data["dim"] == 2
    assert data["matrix"] == [["X11", "X12"], ["X21", "X22"]]
