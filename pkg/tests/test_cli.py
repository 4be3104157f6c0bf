import json
import subprocess
import sys

import pytest

from torsionnorm.cli import EXIT_COMPUTE, EXIT_PARSE, EXIT_VALIDATION, bundled_jobs, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def write_job(tmp_path, doc, name="job.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def test_trefoil_job(capsys):
    code, out = run(capsys, "run", "trefoil")
    assert code == 0
    doc = json.loads(out)
    kinds = {r["type"]: r for r in doc["results"]}
    assert kinds["torsion"]["verified"]
    assert kinds["delta_bar"]["delta_bar"] == 1 and kinds["delta_bar"]["paths_agree"]
    assert kinds["norm_ball"]["ball_vertices"] == [[-1], [1]]


def test_hopf_norm_ball_degenerate(capsys):
    code, out = run(capsys, "run", "hopf")
    assert code == 0
    res = json.loads(out)["results"]
    assert [r["delta_bar"] for r in res if r["type"] == "delta_bar"] == [0, 0]
    ball = [r for r in res if r["type"] == "norm_ball"][0]
    assert ball["degenerate"] and ball["zero_seminorm"]


def test_trefoil_metabelian_job(capsys):
    code, out = run(capsys, "run", "trefoil-metabelian")
    assert code == 0
    res = json.loads(out)["results"]
    assert [r["delta_bar"] for r in res if r["type"] == "delta_bar"] == [1]


def test_parse_error_location(tmp_path, capsys):
    job = {"presentation": {"generators": "ab", "relators": ["abAB", "ab?B"]}, "queries": []}
    code, out = run(capsys, "run", write_job(tmp_path, job))
    assert code == EXIT_PARSE
    err = json.loads(out)["error"]
    assert err["type"] == "ParseError"
    assert err["location"]["line"] == 2 and err["location"]["column"] == 3
    assert err["location"]["path"] == "presentation.relators[1]"


def test_invalid_json(tmp_path, capsys):
    code, out = run(capsys, "run", write_job(tmp_path, '{"presentation": \n  [1, 2'))
    assert code == EXIT_PARSE
    assert json.loads(out)["error"]["location"]["line"] == 2


@pytest.mark.parametrize("job,path", [
    ({"queries": []}, None),
    ({"presentation": {"known": "trefoil"}, "queries": [{"type": "volume"}]}, "queries[0].type"),
    ({"presentation": {"known": "trefoil"}, "queries": [{"type": "delta_bar", "phi": [1, 2]}]},
     "queries[0].phi"),
    ({"presentation": {"known": "trefoil"}, "queries": [{"type": "delta_bar", "phi": [0]}]},
     "queries[0].phi"),
    ({"presentation": {"known": "trefoil"},
      "representation": {"type": "metabelian", "action": [[[0, -1], [1, 3]]], "psi": [[1], [1]],
                         "exponents": [[0, 0], [1, 0]]}}, "representation"),
])
def test_validation_errors(tmp_path, capsys, job, path):
    code, out = run(capsys, "run", write_job(tmp_path, job))
    assert code == EXIT_VALIDATION
    err = json.loads(out)["error"]
    if path is not None:
        assert err["location"]["path"] == path


def test_compute_error(tmp_path, capsys):
    job = {"presentation": {"generators": "ab", "relators": ["abAB", "aB"]},
           "representation": {"type": "abelian"}, "queries": [{"type": "torsion"}]}
    code, out = run(capsys, "run", write_job(tmp_path, job))
    assert code == EXIT_COMPUTE
    assert json.loads(out)["error"]["type"] == "ComputeError"


def test_missing_file(capsys):
    code, out = run(capsys, "run", "/nonexistent/job.json")
    assert code == EXIT_VALIDATION


def test_compatible_rep_job(tmp_path, capsys):
    job = {
        "presentation": {"generators": "ab", "relators": ["abAB"]},
        "ring": {"m": 2, "k": 0},
        "representation": {"type": "compatible", "psi": [[1, 0], [0, 1]], "units": [[["2"]], [["3"]]]},
        "queries": [{"type": "torsion"}, {"type": "delta_bar", "phi": [1, 1]}],
    }
    code, out = run(capsys, "run", write_job(tmp_path, job))
    assert code == 0, out
    res = json.loads(out)["results"]
    assert res[1]["paths_agree"]


def test_deterministic_output(capsys):
    outs = set()
    for _ in range(3):
        for name in bundled_jobs():
            code, out = run(capsys, "run", name)
            assert code == 0
            outs.add((name, out))
    assert len(outs) == len(bundled_jobs())


def test_timing_flag(capsys):
    code, out = run(capsys, "run", "trefoil", "--timing")
    assert "timing" in json.loads(out)
    code, out = run(capsys, "run", "trefoil")
    assert "timing" not in json.loads(out)


def test_examples_listing(capsys):
    code, out = run(capsys, "examples")
    assert code == 0
    for name in ("trefoil", "hopf", "whitehead", "trefoil-metabelian"):
        assert name in out
    code, out = run(capsys, "examples", "--show", "hopf")
    assert json.loads(out)["name"] == "hopf"
    assert run(capsys, "examples", "--show", "nope")[0] == EXIT_VALIDATION


def test_selftest_query(tmp_path, capsys):
    job = {"presentation": {"known": "unknot"}, "queries": [{"type": "selftest", "seed": 7}]}
    code, out = run(capsys, "run", write_job(tmp_path, job))
    assert code == 0
    res = json.loads(out)["results"][0]
    assert res["failed"] == 0 and res["passed"] > 0 and res["seed"] == 7


def test_svg_output(tmp_path, capsys):
    svg = tmp_path / "ball.svg"
    code, _ = run(capsys, "run", "whitehead", "--svg", str(svg))
    assert code == 0
    text = svg.read_text()
    assert text.startswith("<svg") and "<polygon" in text
    for label in ("(1, 0)", "(0, 1)", "(-1, 0)", "(0, -1)"):
        assert label in text


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "torsionnorm.cli", "run", "trefoil"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"][1]["delta_bar"] == 1
