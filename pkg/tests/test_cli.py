import json
import subprocess
import sys

import pytest

from ferrers.cli import main
from ferrers.complex import build_bipartite_complex


@pytest.fixture
def write(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    return _write


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_shape_command(write, capsys):
    code, data = run_json(capsys, "shape", write("s.json", {"lambda": [5, 4, 4], "mu": [1, 2, 3]}))
    assert code == 0
    assert data["generator_count"] == 7 and data["predicted_specialized_count"] == 7
    assert data["diagram"] == [".####", "..##", "...#"]
    code, data = run_json(capsys, "shape", write("t.json", {"lambda": [1], "mu": [0]}))
    assert code == 0 and data["generators"] == ["x1*y1"]


def test_shape_rejects_non_partition(write, capsys):
    code, data = run_json(capsys, "shape", write("bad.json", {"lambda": [2, 3]}))
    assert code == 2 and data["error"] == "NotAPartition"


def test_malformed_files(tmp_path, capsys):
    bad = tmp_path / "x.json"
    bad.write_text("{not json")
    assert main(["shape", str(bad)]) == 2
    assert main(["shape", str(tmp_path / "missing.json")]) == 2
    assert "MalformedInput" in capsys.readouterr().err


def test_resolve(write, capsys):
    code, data = run_json(capsys, "resolve", write("p.json", {"lambda": [3, 3]}))
    assert code == 0 and data["ranks"] == [1, 6, 9, 5, 1] and data["minimal"]
    code, data = run_json(capsys, "resolve", write("s.json", {"lambda": [4, 4, 4], "mu": [1, 2, 3]}), "--specialize")
    assert code == 0 and data["betti"]["totals"] == [1, 6, 8, 3]
    code, data = run_json(capsys, "resolve", write("b.json", {"lambda": [2, 2]}), "--specialize")
    assert code == 3 and data["guaranteed_minimal"] is False


def test_betti_commands(write, capsys):
    code, data = run_json(capsys, "betti", write("s.json", {"lambda": [4, 4], "mu": [1, 2]}), "--specialize")
    assert code == 0 and data["closed_form"] == [1, 5, 6, 2] and data["betti"]["totals"] == [1, 5, 6, 2]
    ideal = {"variables": ["x1", "x2", "x3"], "generators": [[1, 1, 0], [1, 0, 1], [0, 1, 1]]}
    code, data = run_json(capsys, "betti", write("i.json", ideal), "--field", "Q")
    assert code == 0 and data["betti"]["totals"] == [1, 3, 2] and data["fields"] == ["Q"]


def test_specialize(write, capsys):
    code, data = run_json(capsys, "specialize", write("s.json", {"lambda": [5, 5, 5], "mu": [1, 3, 4]}))
    assert code == 0
    assert data["generators"] == ["x1*x2", "x1*x3", "x1*x4", "x1*x5", "x2*x4", "x2*x5", "x3*x5"]


@pytest.mark.parametrize(
    "shape",
    [{"lambda": [5, 5, 5], "mu": [1, 3, 4]}, {"lambda": [4, 3], "mu": [1, 2]}],
)
def test_verify_specialized_shapes(write, capsys, shape):
    code, data = run_json(capsys, "verify", write("s.json", shape), "--specialize")
    assert code == 0 and data["failures"] == []


def test_verify_nonresolution_fixture(write, capsys):
    data = {
        "context": ["x1", "x2", "y1", "y2"],
        "faces": [
            {"rows": [1], "cols": [1], "label": [1, 0, 1, 0]},
            {"rows": [2], "cols": [2], "label": [0, 1, 0, 1]},
        ],
    }
    code = main(["verify", write("c.json", data)])
    out = capsys.readouterr().out
    assert code == 4
    assert "first counterexample" in out and "x1*x2*y1*y2" in out


def test_verify_without_hypothesis(write, capsys):
    # two vertices share the label x1*x2 and nothing joins them below it
    code, data = run_json(capsys, "verify", write("b.json", {"lambda": [2, 2]}), "--specialize")
    assert code == 4 and "x1*x2 " in data["failures"][0]
    code, data = run_json(capsys, "verify", write("c.json", {"lambda": [3, 3], "mu": [0, 0]}), "--specialize")
    assert code == 4 and data["failures"][0].startswith("restriction to x1*x2 ")


def test_verify_ideal(write, capsys):
    ideal = {"variables": ["x1", "x2"], "generators": [[2, 0], [1, 1]]}
    code, data = run_json(capsys, "verify", write("i.json", ideal), "--oracle", "both", "--field", "2", "--field", "Q")
    assert code == 0 and data["disagreements"] == []


def test_graph_commands(write, capsys):
    k4e = write("k.json", {"m": 4, "edges": [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4]]})
    code, data = run_json(capsys, "graph", "analyze", k4e)
    assert code == 0 and data["report"]["betti"] == [1, 5, 6, 2] and not data["report"]["cohen_macaulay"]
    code, data = run_json(capsys, "graph", "shape", k4e)
    assert (data["n"], data["lambda"], data["mu"]) == (2, [4, 4], [1, 2])
    code, data = run_json(capsys, "graph", "threshold", k4e)
    assert code == 0 and data["shape"]["n"] == 2

    c4 = write("c4.json", {"m": 4, "edges": [[1, 2], [2, 3], [3, 4], [1, 4]]})
    code, data = run_json(capsys, "graph", "threshold", c4)
    assert code == 3 and data["error"] == "NotThreshold"

    looped = write("l.json", {"m": 3, "edges": [[1, 2], [1, 3], [2, 3]], "loops": [1, 2, 3]})
    code, data = run_json(capsys, "graph", "analyze", looped)
    assert code == 0 and data["report"]["cohen_macaulay"]


def test_graph_condition_failure_falls_back(write, capsys):
    # a path on five vertices: the derived diagram has a missing cell
    path = write("p.json", {"m": 5, "edges": [[1, 2], [2, 3], [3, 4], [4, 5]]})
    code = main(["graph", "analyze", path])
    out = capsys.readouterr().out
    assert code in (3, 5)
    assert "[oracle only]" in out


def test_export(write, capsys, tmp_path):
    shape = write("s.json", {"lambda": [3, 3]})
    out = tmp_path / "complex.json"
    assert main(["export", "complex", shape, "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text()) == build_bipartite_complex(2, 3).to_json()
    assert main(["export", "dot", shape]) == 0
    assert capsys.readouterr().out.startswith("graph complex {")
    code, data = run_json(capsys, "export", "ideal", write("g.json", {"m": 2, "edges": [[1, 2]], "loops": [1]}))
    assert data["generators"] == [[2, 0], [1, 1]]


def test_default_fields_from_environment(write, capsys, monkeypatch):
    monkeypatch.setenv("FERRERS_DEFAULT_FIELDS", "3,Q")
    code, data = run_json(capsys, "verify", write("s.json", {"lambda": [2, 2], "mu": [0, 1]}))
    assert code == 0
    assert [r["field"] for r in data["acyclicity"]] == ["GF(3)", "Q"]


def test_bad_field(write, capsys):
    assert main(["verify", write("s.json", {"lambda": [1]}), "--field", "6"]) == 2


def test_output_is_deterministic(write, capsys):
    shape = write("s.json", {"lambda": [4, 4, 3], "mu": [0, 1, 2]})
    outputs = []
    for jobs in ("1", "1", "3"):
        main(["verify", shape, "--format", "json", "--jobs", jobs])
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1] == outputs[2]


def test_module_entry_point(write):
    shape = write("s.json", {"lambda": [3, 3]})
    proc = subprocess.run([sys.executable, "-m", "ferrers", "resolve", shape], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "ranks: (1, 6, 9, 5, 1)" in proc.stdout
