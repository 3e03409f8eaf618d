import json
import subprocess
import sys

import pytest

from burnsolver.burning import is_valid_burning_sequence
from burnsolver.cli import main
from burnsolver.graph import parse_edge_list, read_edge_list
from burnsolver.precompute import compute_apsp


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_json(capsys, toy_file):
    code, out, _ = run(capsys, "solve", "--graph", str(toy_file), "--json", "--seed", "1")
    assert code == 0
    rec = json.loads(out)
    assert rec["bestLength"] == 3 and rec["graph"] == "toy.edges"
    g = read_edge_list(toy_file)
    witness = g.ids([str(v) for v in rec["witness"]])
    assert is_valid_burning_sequence(compute_apsp(g), witness)


def test_solve_text(capsys, toy_file):
    code, out, _ = run(capsys, "solve", "--graph", str(toy_file), "--name", "toy")
    assert code == 0
    assert "bestLength  3" in out and "toy" in out


def test_decide_found_and_not_found(capsys, toy_file):
    code, out, _ = run(capsys, "decide", "--graph", str(toy_file), "--b", "3")
    assert code == 0 and out.startswith("FOUND")
    code, out, _ = run(capsys, "decide", "--graph", str(toy_file), "--b", "2", "--max-gens", "20")
    assert code == 1 and "NOT_FOUND" in out


def test_decide_json(capsys, toy_file):
    code, out, _ = run(capsys, "decide", "--graph", str(toy_file), "--b", "4", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["found"] and len(rec["witness"]) <= 4


def test_gen_er(capsys):
    code, out, _ = run(capsys, "gen", "--model", "er", "--n", "10", "--edges", "15", "--seed", "1")
    assert code == 0
    g = parse_edge_list(out)
    assert (g.n, g.m) == (10, 15)
    _, again, _ = run(capsys, "gen", "--model", "er", "--n", "10", "--edges", "15", "--seed", "1")
    assert again == out


def test_gen_to_file(capsys, tmp_path):
    path = tmp_path / "ba.edges"
    code, _, _ = run(capsys, "gen", "--model", "ba", "--n", "50", "--attach", "2", "--out", str(path))
    assert code == 0
    assert read_edge_list(path).n == 50


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--graph", "does-not-exist.edges"],
        ["solve"],
        ["decide", "--graph", "x", "--b", "0"],
        ["gen", "--model", "er", "--n", "10"],
        ["gen", "--model", "er", "--n", "4", "--edges", "7"],
        ["precompute", "--graph", "x"],
        ["frobnicate"],
    ],
)
def test_input_errors_exit_2(capsys, monkeypatch, argv):
    monkeypatch.delenv("BURNSOLVER_CACHE", raising=False)
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_malformed_graph_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.edges"
    bad.write_text("1 2\n3\n")
    code, _, err = run(capsys, "solve", "--graph", str(bad))
    assert code == 2 and "line 2" in err


def test_precompute_cache(capsys, tmp_path, toy_file, monkeypatch):
    monkeypatch.setenv("BURNSOLVER_CACHE", str(tmp_path / "cache"))
    code, out, _ = run(capsys, "precompute", "--graph", str(toy_file))
    assert code == 0 and "cached as" in out
    assert list((tmp_path / "cache").glob("*.bin"))
    code, out, _ = run(capsys, "solve", "--graph", str(toy_file), "--json")
    assert code == 0 and json.loads(out)["bestLength"] == 3


def test_bench_command(capsys, tmp_path):
    manifest = tmp_path / "m.yaml"
    manifest.write_text(
        "entries:\n"
        "  - name: p16\n    generator: {model: path, n: 16}\n    expectedLength: 4\n    repeats: 2\n"
        "  - name: gone\n    path: nowhere.edges\n    expectedLength: 5\n"
    )
    out_json = tmp_path / "rows.json"
    code, out, _ = run(capsys, "bench", "--manifest", str(manifest), "--out", str(out_json))
    assert code == 0
    assert "PASS" in out and "SKIPPED" in out
    rows = json.loads(out_json.read_text())
    assert [r["status"] for r in rows] == ["PASS", "SKIPPED"]


def test_module_entry_point_byte_identical(toy_file):
    cmd = [sys.executable, "-m", "burnsolver.cli", "solve", "--graph", str(toy_file),
           "--json", "--threads", "1", "--seed", "42"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["bestLength"] == 3
