import json

import pytest

from burnsolver.bench import (
    BenchmarkEntry,
    BenchmarkManifest,
    ManifestError,
    build_graph,
    format_table,
    load_manifest,
    parse_manifest,
    rows_to_json,
    run_benchmark,
    run_entry,
)
from burnsolver.ga import GaConfig
from burnsolver.graph import format_edge_list


def test_parse_camel_and_snake():
    m = parse_manifest(
        [
            {"name": "a", "generator": {"model": "ba", "n": 30}, "expectedLength": 4.2, "timeBudget": 60},
            {"name": "b", "generator": {"model": "er", "n": 30, "edges": 60}, "expected_length": 5},
        ]
    )
    a, b = m.entries
    assert a.expected_length == 4.2 and a.time_budget == 60 and a.repeats == 10
    assert a.tolerance == pytest.approx(0.3)
    assert b.tolerance == 0.0


def test_empty_manifest(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("")
    assert load_manifest(path).entries == ()
    assert run_benchmark(BenchmarkManifest()) == []
    assert format_table([]).startswith("name")


@pytest.mark.parametrize(
    "data",
    [
        [{"name": "x"}],
        [{"name": "x", "path": "a", "generator": {"model": "ba", "n": 5}}],
        [{"name": "x", "path": "a"}, {"name": "x", "path": "b"}],
        [{"name": "x", "path": "a", "repeats": 0}],
        [{"name": "x", "path": "a", "colour": "red"}],
        {"entries": "nope"},
    ],
)
def test_manifest_errors(data):
    with pytest.raises(ManifestError):
        parse_manifest(data)


def test_relative_path_resolution(tmp_path):
    (tmp_path / "m.yaml").write_text("- name: ns\n  path: data/ns.edges\n")
    entry = load_manifest(tmp_path / "m.yaml").entries[0]
    assert entry.path == tmp_path / "data" / "ns.edges"


def test_missing_dataset_skipped(tmp_path):
    row = run_entry(BenchmarkEntry("ns", path=tmp_path / "none.edges", expected_length=6), GaConfig())
    assert row.status == "SKIPPED" and row.lengths == []


def test_fail_marked_on_length():
    entry = BenchmarkEntry("p16", generator={"model": "path", "n": 16}, expected_length=3, repeats=1)
    row = run_entry(entry, GaConfig())
    assert row.status == "FAIL" and "mean length" in row.note
    assert row.lengths == [4]


def test_fail_marked_on_time():
    entry = BenchmarkEntry("p9", generator={"model": "path", "n": 9}, expected_length=3, time_budget=0.0, repeats=1)
    row = run_entry(entry, GaConfig())
    assert row.status == "FAIL" and "run time" in row.note


def test_pass_and_json(tmp_path, toy):
    path = tmp_path / "toy.edges"
    path.write_text(format_edge_list(toy))
    rows = run_benchmark(BenchmarkManifest((BenchmarkEntry("toy", path=path, expected_length=3, repeats=2),)))
    assert rows[0].status == "PASS" and rows[0].mean_length == 3
    rec = json.loads(rows_to_json(rows))[0]
    assert rec["meanLength"] == 3 and rec["n"] == 12
    assert "toy" in format_table(rows)


def test_generator_seeded():
    spec = {"model": "er", "n": 40, "edges": 80}
    a, b = build_graph(spec, 3), build_graph(spec, 3)
    assert a.content_hash() == b.content_hash()
    assert build_graph(spec, 4).content_hash() != a.content_hash()
    with pytest.raises(ManifestError):
        build_graph({"model": "lattice", "n": 4}, 0)
