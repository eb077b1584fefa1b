import csv
import io
import json

import numpy as np
import pytest

from rigidity.cli import main
from rigidity.linalg import dump_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_ybe_pass_and_fail(capsys):
    code, out, _ = run(capsys, "check-ybe", "--model", "swap", "--assume-pairwise")
    obj = json.loads(out)
    assert code == 0 and obj["passes"] and obj["boundary_free"]
    code, out, _ = run(capsys, "check-ybe", "--model", "perturbed_swap:0.1")
    assert code == 1 and not json.loads(out)["passes"]


def test_check_ybe_spectral_csv(capsys):
    code, out, _ = run(capsys, "check-ybe", "--model", "xxx", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 17


def test_check_ybe_from_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    p = np.zeros((4, 4))
    p[[0, 1, 2, 3], [0, 2, 1, 3]] = 1
    dump_matrix(p, path)
    code, _, _ = run(capsys, "check-ybe", "--model", f"file:{path}")
    assert code == 0
    dump_matrix(np.eye(3), path)
    code, _, err = run(capsys, "check-ybe", "--model", f"file:{path}")
    assert code == 2 and "error" in err


def test_filtration_always_exits_zero(capsys):
    code, out, _ = run(capsys, "filtration", "--model", "random_gate:42", "--n", "2..3")
    obj = json.loads(out)
    assert code == 0 and obj["verdict"] == "saturating"
    assert [r["n"] for r in obj["reports"]] == [2, 3]


def test_filtration_seed_flag(capsys):
    _, a, _ = run(capsys, "filtration", "--model", "random_gate", "--seed", "5", "--n", "3..3")
    _, b, _ = run(capsys, "filtration", "--model", "random_gate:5", "--n", "3..3")
    assert a == b


def test_spectrum_and_bethe(capsys):
    code, out, _ = run(capsys, "spectrum", "--sites", "6", "--magnons", "2")
    obj = json.loads(out)
    assert code == 0 and obj["coverage"] == "10/10"
    code, out, _ = run(capsys, "bethe", "--sites", "4", "--magnons", "2")
    assert code == 0 and json.loads(out)["coverage"] == "2/2"


def test_spectrum_rejects_other_models(capsys):
    code, _, _ = run(capsys, "spectrum", "--model", "swap", "--sites", "4", "--magnons", "1")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["check-ybe", "--model", "bogus"],
    ["filtration", "--model", "swap", "--n", "5..2"],
    ["filtration", "--model", "swap", "--max-depth", "0"],
    ["check-ybe", "--model", "swap", "--tol-ybe", "-1"],
    ["nonsense"],
    [],
])
def test_usage_errors_exit_two(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_dimension_ceiling(monkeypatch, capsys):
    monkeypatch.setenv("RIGIDITY_MAX_DIM", "16")
    code, _, err = run(capsys, "filtration", "--model", "swap", "--n", "2..5")
    assert code == 2 and "ceiling" in err


def test_out_file(tmp_path, capsys):
    path = tmp_path / "rep.json"
    code, out, _ = run(capsys, "report", "--models", "swap,identity", "--out", str(path))
    assert code == 0 and out == ""
    rows = json.loads(path.read_text())["rows"]
    assert [r["model"] for r in rows] == ["swap", "identity"]
    assert all(r["dichotomy"] == "solvable" for r in rows)


def test_report_dichotomy(capsys):
    _, out, _ = run(capsys, "report", "--models", "perturbed_swap:0.1,random_gate:42", "--n", "2..3")
    rows = {r["model"]: r for r in json.loads(out)["rows"]}
    assert rows["random_gate:42"]["filtration"]["verdict"] == "saturating"
    assert not rows["perturbed_swap:0.1"]["ybe"]["passes"]
    assert {r["dichotomy"] for r in rows.values()} == {"obstructed"}
