from __future__ import annotations

import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest
from referencing import Registry, Resource

from hexind import graphs
from hexind.cli import main


def _schemas():
    out = {}
    for entry in resources.files("hexind").joinpath("schemas").iterdir():
        if entry.name.endswith(".json"):
            out[entry.name] = json.loads(entry.read_text())
    return out


SCHEMAS = _schemas()
REGISTRY = Registry().with_resources((name, Resource.from_contents(s)) for name, s in SCHEMAS.items())


def validate(doc, name):
    jsonschema.Draft202012Validator(SCHEMAS[name], registry=REGISTRY).validate(doc)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_schemas_are_valid():
    for s in SCHEMAS.values():
        jsonschema.Draft202012Validator.check_schema(s)


def test_build_json_and_dot(capsys, tmp_path):
    code, out, _ = run(capsys, "build", "H2", "2")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "graph.json")
    assert len(doc["vertices"]) == 16 and len(doc["edges"]) == 19
    dot = tmp_path / "g.dot"
    assert run(capsys, "build", "H2", "2", "--format", "dot", "-o", str(dot))[0] == 0
    assert graphs.from_dot(dot.read_text()) == graphs.named_family("H2", 2)


def test_graph_file_input(capsys, tmp_path):
    f = tmp_path / "c6.json"
    f.write_text(graphs.to_json(graphs.cycle(6)))
    code, out, _ = run(capsys, "homology", "--graph", str(f))
    assert code == 0 and json.loads(out)["betti"] == {"1": 2}


def test_reduce_trace(capsys):
    code, out, _ = run(capsys, "reduce", "Z2", "1", "--json")
    doc = json.loads(out)
    validate(doc, "trace.json")
    assert code == 0 and doc["contractible"]
    code, out, _ = run(capsys, "reduce", "X1", "3")
    assert code == 0 and "suspensions" in out


def test_reduce_with_script(capsys, tmp_path):
    script = tmp_path / "x1.fold"
    script.write_text("fold 1:2n 1:2n-2\nfold 1:2n 2:2n-1\n")
    code, out, _ = run(capsys, "reduce", "X1", "3", "--script", str(script), "--json")
    assert code == 0 and json.loads(out)["suspensions"] >= 2
    bad = tmp_path / "bad.fold"
    bad.write_text("fold 1:1 1:3\n")
    assert run(capsys, "reduce", "X1", "3", "--script", str(bad))[0] == 2


def test_homology_and_split(capsys):
    code, out, _ = run(capsys, "homology", "H1", "3")
    doc = json.loads(out)
    validate(doc, "homology.json")
    assert doc["betti"] == {"3": 2}
    code, out, _ = run(capsys, "homology", "H1", "2", "--split", "1:5")
    doc = json.loads(out)
    validate(doc, "split.json")
    assert doc["status"] == "consistent"
    assert run(capsys, "homology", "H1", "2", "--split", "9:9")[0] == 2


def test_homology_over_budget_warns(capsys):
    code, out, err = run(capsys, "homology", "H2", "3", "--max-faces", "10", "--no-reduce")
    assert code == 0 and "warning" in err and out == ""


def test_predict_and_table(capsys):
    code, out, _ = run(capsys, "predict", "H2", "3")
    assert (code, out) == (0, "S5+S6\n")
    code, out, _ = run(capsys, "predict", "Z3", "3", "--format", "json")
    validate(json.loads(out), "predict.json")
    code, out, _ = run(capsys, "table", "H2", "3")
    assert out == "family,n,type\nH2,1,S2+S2\nH2,2,S4+S4+S4\nH2,3,S5+S6\n"
    code, out, _ = run(capsys, "table", "H3", "2", "--format", "json", "--amended")
    doc = json.loads(out)
    validate(doc, "table.json")
    assert doc["rows"][1]["render"] == "S5+S6"


def test_verify_exit_codes_and_json(capsys):
    code, out, _ = run(capsys, "verify", "H1", "2", "--json", "--no-time")
    doc = json.loads(out)
    validate(doc, "verify.json")
    assert code == 0 and doc["verdict"] == "match" and "seconds" not in doc
    code, out, _ = run(capsys, "verify", "Z3", "3", "--json")
    doc = json.loads(out)
    validate(doc, "verify.json")
    assert code == 1 and doc["verdict"] == "mismatch"
    assert run(capsys, "verify", "Z3", "3", "--amended")[0] == 0


def test_verify_skip_is_not_failure(capsys):
    code, out, err = run(capsys, "verify", "H2", "3", "--max-faces", "10", "--json")
    doc = json.loads(out)
    validate(doc, "verify.json")
    assert code == 0 and doc["verdict"] == "skipped-too-large" and "skipped" in err


def test_verify_output_is_byte_stable(capsys):
    first = run(capsys, "verify", "Y", "2", "--json", "--no-time")[1]
    assert run(capsys, "verify", "Y", "2", "--json", "--no-time")[1] == first


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "--list")
    assert code == 0 and "x1" in out
    code, out, _ = run(capsys, "certify", "x1", "--json")
    doc = json.loads(out)
    validate(doc, "certify.json")
    assert code == 0 and doc["ok"]
    code, out, _ = run(capsys, "certify", "x1")
    assert "CERTIFIED" in out
    # at n = 1 the script's labels run off the graph
    code, out, _ = run(capsys, "certify", "y-link", "--n", "2", "--no-homology")
    assert code == 1 and "NOT CERTIFIED" in out


@pytest.mark.parametrize("argv", [
    ["build", "H9", "2"],
    ["build", "Y1", "1"],
    ["build"],
    ["predict", "W1", "3"],
    ["table", "H2", "0"],
    ["verify", "Q", "1"],
    ["certify", "nope"],
    ["certify"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hexind.cli", "predict", "X1", "4"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "S4\n"
