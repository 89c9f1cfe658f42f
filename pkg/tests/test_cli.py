import json

import pytest

from starsim.cli import main
from starsim.core_model import SparseHermitian, load_json, save_json
from starsim.coloring import rounds


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def matrix_file(tmp_path, capsys):
    path = tmp_path / "h.json"
    assert run(["generate", "--n", 24, "--d", 3, "--seed", 4, "--diagonal", "--out", path], capsys)[0] == 0
    return path


def test_generate_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(["generate", "--n", 40, "--d", 5, "--seed", 11, "--out", p], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    h = load_json(a)
    assert h.n == 40 and h.d <= 5


def test_generate_ring(capsys):
    code, out = run(["generate", "--n", 4, "--d", 2, "--ring"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert sorted((x, y) for x, y, *_ in payload["entries"]) == [(0, 1), (0, 3), (1, 2), (2, 3)]


def test_decompose_reports_and_passes(matrix_file, capsys):
    code, out = run(["decompose", matrix_file], capsys)
    report = json.loads(out)
    assert code == 0 and report["pass"]
    assert report["rounds"] == rounds(24)
    assert report["m"] == 6 * report["d"] + 1
    assert all(c["pass"] for c in report["checks"].values())


def test_decompose_single_edge(tmp_path, capsys):
    path = tmp_path / "one.json"
    save_json(SparseHermitian.from_edges(2, [(0, 1, 0.5j)]), path)
    code, out = run(["decompose", path], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["galaxies"] == [{"c": 1, "t": 1, "stars": [{"center": 0, "leaves": [1]}]}]


def test_decompose_empty_matrix(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"n": 5, "entries": []}))
    code, out = run(["decompose", path], capsys)
    report = json.loads(out)
    assert code == 0 and report["galaxies"] == [] and report["pass"]


def test_simulate_time_zero(matrix_file, capsys):
    code, out = run(["simulate", matrix_file, "--t", 0], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["r"] == 0 and report["errors"]["trace_distance"] == 0


def test_simulate_diagonal_only(tmp_path, capsys):
    path = tmp_path / "diag.json"
    save_json(SparseHermitian.from_edges(4, [], diagonal=[0.5, -1.0, 2.0, 0.25]), path)
    code, out = run(["simulate", path, "--t", 3.0, "--state", "random"], capsys)
    report = json.loads(out)
    assert code == 0 and report["errors"]["trace_distance"] <= 1e-12


def test_simulate_accuracy_and_counts(matrix_file, tmp_path, capsys):
    out_path = tmp_path / "sim.json"
    code, _ = run(["simulate", matrix_file, "--epsilon", 1e-4, "--k", 2, "--out", out_path], capsys)
    report = json.loads(out_path.read_text())
    assert code == 0
    assert report["errors"]["trace_distance"] <= 1e-4
    assert report["circuit_cost"] == report["predicted_circuit_cost"]


@pytest.mark.parametrize("argv", [
    ["generate", "--n", 0, "--d", 2],
    ["generate", "--n", 8, "--d", 2, "--density", 1.5],
    ["generate", "--n", 2, "--d", 2, "--ring"],
    ["simulate", "missing.json"],
    ["benchmark", "--values", "2,x"],
    ["benchmark", "--epsilon", -1],
])
def test_bad_input_exits_2(argv, capsys):
    assert main([str(a) for a in argv]) == 2
    assert "error:" in capsys.readouterr().err


def test_bad_matrix_file_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 3, "entries": [[1, 1, 1.0, 0.0]]}))
    assert main(["decompose", str(bad)]) == 2
    bad.write_text("{not json")
    assert main(["simulate", str(bad)]) == 2
    bad.write_text(json.dumps({"n": 3, "entries": [[0, 1, 1.0, 0.0]]}))
    assert main(["simulate", str(bad), "--epsilon", "0"]) == 2


def test_verify_passes(matrix_file, capsys):
    code, out = run(["verify", matrix_file, "--epsilon", 1e-3], capsys)
    report = json.loads(out)
    assert code == 0 and report["pass"] and report["circuit_cost_matches_closed_form"]


def test_benchmark_csv_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    argv = ["benchmark", "--sweep", "d", "--values", "2,4", "--n", 32]
    assert run(argv + ["--out", a], capsys)[0] == 0
    assert run(argv + ["--out", b], capsys)[0] == 0
    assert a.with_suffix(".csv").read_bytes() == b.with_suffix(".csv").read_bytes()
    summary = json.loads(a.with_suffix(".json").read_text())["summary"]
    assert summary["all_within_epsilon"]
    assert len(a.with_suffix(".csv").read_text().strip().splitlines()) == 3
