import json

import networkx as nx
import pytest

from conftest import systems_path
from ssgraph import corpus
from ssgraph.cli import main
from ssgraph.errors import SpecError
from ssgraph.io import SCHEMA_VERSION, build_system, dumps, export_spec, read_spec, spectrum_dot, validate_spec
from ssgraph.spectrum import prim_spectrum


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_golden(capsys):
    code, out, _ = run(capsys, "spectrum", systems_path("e22_z2.json"))
    assert code == 0
    assert out.strip() == "components: point[{v0}] , circle[{v0,v1,v2}] n=1; order: point < circle"


def test_yaml_encoding_matches_json(capsys):
    a = run(capsys, "spectrum", systems_path("e22_z2.json"), "--json")[1]
    b = run(capsys, "spectrum", systems_path("e22_z2.yaml"), "--json")[1]
    assert a == b


def test_per_golden(capsys):
    code, out, _ = run(capsys, "per", systems_path("c2xc3.json"), "--box", "4")
    assert (code, out.strip()) == (0, "Per = <(2,0),(0,3)> (certified up to box 4)")


def test_validate_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vertices": ["v"], "edges": [{"name": "e", "range": "v"}]}))
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 1
    assert "$.edges[0]" in err


def test_validate_unparsable(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "validate", str(bad))[0] == 1


def test_schema_path_in_error():
    with pytest.raises(SpecError) as exc:
        validate_spec({"vertices": ["v"], "edges": [], "group": {"generators": [{"name": "1a"}]}})
    assert exc.value.witness == "$.group.generators[0].name"


def test_refusal_exit_code(capsys):
    code, _, err = run(capsys, "spectrum", systems_path("e22_fixed.json"))
    assert code == 2
    assert "('s', 'v0')" in err


def test_refusal_json(capsys):
    code, out, _ = run(capsys, "spectrum", systems_path("e22_fixed.json"), "--json")
    rep = json.loads(out)
    assert code == 2 and rep["witness"] == ["s", "v0"] and rep["schemaVersion"] == SCHEMA_VERSION


def test_cap_failure_exit_code(capsys):
    assert run(capsys, "validate", systems_path("adding_machine.json"), "--cap", "200")[0] == 2


@pytest.mark.parametrize("cmd", ["validate", "tails", "classify", "spectrum", "simplicity", "oracle"])
def test_rank_one_commands(capsys, cmd):
    code, out, _ = run(capsys, cmd, systems_path("breaking.json"), "--json")
    assert code == 0 and json.loads(out)["schemaVersion"] == SCHEMA_VERSION


@pytest.mark.parametrize("cmd", ["validate", "tails", "spectrum", "per", "mperg", "oracle"])
def test_higher_rank_commands(capsys, cmd):
    code, out, _ = run(capsys, cmd, systems_path("layered.json"), "--json")
    assert code == 0 and json.loads(out)["command"] == cmd


def test_converge_command(capsys):
    code, out, _ = run(capsys, "converge", systems_path("torus.json"), "--target", "v@1/3,0",
                       "--seq", "v@1/2,0", "--seq", "v@1/3,0")
    assert code == 0 and out.startswith("Verified")
    code, out, _ = run(capsys, "converge", systems_path("torus.json"), "--target", "v@1/3,0", "--seq", "v@1/2,0")
    assert code == 0 and out.startswith("Refuted")
    assert run(capsys, "converge", systems_path("torus.json"), "--target", "v")[0] == 1


def test_dot_export(capsys):
    code, out, _ = run(capsys, "export", systems_path("e22_z2.json"), "--dot")
    assert code == 0 and "T (n=1)" in out and "n0 -> n1" in out


def _dot_edges(text):
    return [tuple(line.strip().rstrip(";").split(" -> ")) for line in text.splitlines() if "->" in line]


def test_dot_is_acyclic():
    for spec in (corpus.e22(), corpus.breaking_example(3), corpus.breaking_example(4), corpus.e22("none")):
        g = nx.DiGraph(_dot_edges(spectrum_dot(prim_spectrum(build_system(spec)))))
        assert nx.is_directed_acyclic_graph(g)


@pytest.mark.parametrize("name", ["e22_z2.json", "e2_omega.json", "breaking.json", "c2xc3.json",
                                  "layered.json", "swapped_torus.json", "e22_z2.yaml"])
def test_export_round_trip(tmp_path, capsys, name):
    spec = read_spec(systems_path(name))
    exported = export_spec(build_system(spec), spec.get("options"))
    again = export_spec(build_system(exported), exported.get("options"))
    assert dumps(exported) == dumps(again)
    path = tmp_path / "x.json"
    path.write_text(dumps(exported))
    cmd = "spectrum" if name != "c2xc3.json" else "per"
    assert run(capsys, cmd, systems_path(name), "--json")[1] == run(capsys, cmd, str(path), "--json")[1]


def test_export_command_output_reloads(tmp_path, capsys):
    code, out, _ = run(capsys, "export", systems_path("e22_z2.json"))
    assert code == 0
    path = tmp_path / "e.json"
    path.write_text(out)
    assert run(capsys, "tails", str(path))[1] == run(capsys, "tails", systems_path("e22_z2.json"))[1]
