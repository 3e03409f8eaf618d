"""Acceptance gate. Every test records one pass/fail line in the terminal summary."""
import json
import math
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

import conftest
from burnsolver.bench import BenchmarkEntry, run_entry
from burnsolver.burning import exact_burning_number, is_valid_burning_sequence, sequence_cost
from burnsolver.cli import main
from burnsolver.driver import find_burning_length
from burnsolver.ga import GaConfig
from burnsolver.generators import generate_barabasi_albert, generate_erdos_renyi, generate_gnp, path_graph
from burnsolver.graph import Graph, connected_components
from burnsolver.precompute import compute_apsp, compute_betweenness, compute_middle_matrix, precompute

from oracles import apsp, cost_def, naive_betweenness


def record(key, ok, detail):
    conftest.ACCEPTANCE[key] = f"{'PASS' if ok else 'FAIL'} ({detail})"
    return ok


def connected_gnp(n, p, seed):
    """Seeded connected G(n, p): redraw with the next sub-seed until connected."""
    for k in range(1000):
        g = generate_gnp(n, p, seed * 1000 + k)
        if connected_components(g).count == 1:
            return g
    raise RuntimeError("no connected draw")


def test_c1_toy(capsys, toy, toy_pre, toy_file):
    d = toy_pre.dist
    checks = [
        is_valid_burning_sequence(d, toy.ids(["4", "10", "7"])),
        is_valid_burning_sequence(d, toy.ids(["5", "10", "2"])),
        is_valid_burning_sequence(d, toy.ids(["2", "10", "1", "7"])),
        not is_valid_burning_sequence(d, toy.ids(["3", "8", "12"])),
    ]
    oracle = exact_burning_number(toy, d).length
    # Compile (or load cached) kernels on another graph so the timing covers the solve only.
    warm = toy_file.parent / "warm.edges"
    warm.write_text("a b\nb c\n")
    start = time.perf_counter()
    main(["solve", "--graph", str(warm), "--json"])
    compile_s = time.perf_counter() - start
    capsys.readouterr()
    start = time.perf_counter()
    code = main(["solve", "--graph", str(toy_file), "--json"])
    elapsed = time.perf_counter() - start
    length = json.loads(capsys.readouterr().out)["bestLength"]
    ok = all(checks) and oracle == 3 and code == 0 and length == 3 and elapsed < 5
    detail = f"validity {sum(checks)}/4, oracle {oracle}, solve {length} in {elapsed:.2f}s < 5s, kernel warm-up {compile_s:.2f}s"
    assert record("1 toy", ok, detail)


def test_c2_oracle_equivalence():
    start = time.perf_counter()
    agree = 0
    for i in range(50):
        rng = random.Random(i)
        g = connected_gnp(rng.randint(5, 10), 0.35, i)
        pre = precompute(g)
        exact = exact_burning_number(g, pre.dist).length
        got = find_burning_length(g, GaConfig(seed=i), pre=pre).best_length
        agree += got == exact
    elapsed = time.perf_counter() - start
    ok = agree >= 48 and elapsed < 300
    assert record("2 oracle-equivalence", ok, f"{agree}/50 >= 48, {elapsed:.1f}s < 300s")


def test_c3_paths(tmp_path, capsys):
    results = []
    ok = True
    for n in (16, 25, 36, 49, 64, 81):
        g = path_graph(n)
        path = tmp_path / f"p{n}.edges"
        path.write_text("".join(f"{i} {i + 1}\n" for i in range(n - 1)))
        start = time.perf_counter()
        code = main(["solve", "--graph", str(path), "--json"])
        elapsed = time.perf_counter() - start
        length = json.loads(capsys.readouterr().out)["bestLength"]
        expect = math.ceil(math.sqrt(n))
        good = code == 0 and length == expect and elapsed < 30
        if n <= 25:
            good &= exact_burning_number(g, compute_apsp(g), force=True).length == expect
        ok &= good
        results.append(f"P{n}={length}/{elapsed:.1f}s")
    assert record("3 path-closed-form", ok, ", ".join(results) + "; each < 30s")


DATASETS = {
    # name: (candidate file names, bound)
    "netscience": (("netscience.edges", "netscience.txt", "netscience.mtx"), 6),
    "polblogs": (("polblogs.edges", "polblogs.txt", "polblogs.mtx"), 5),
    "reed98": (("reed98.edges", "socfb-Reed98.mtx", "reed98.txt", "reed98.mtx"), 4),
    "mahindas": (("mahindas.edges", "econ-mahindas.mtx", "mahindas.txt", "mahindas.mtx"), 5),
}


def _dataset_dir() -> Path:
    env = os.environ.get("BURNSOLVER_DATASETS")
    return Path(env) if env else Path(__file__).resolve().parent.parent / "datasets"


@pytest.mark.slow
def test_c4_real_datasets():
    root = _dataset_dir()
    parts = []
    ok = True
    skipped = 0
    for name, (files, bound) in DATASETS.items():
        found = next((root / f for f in files if (root / f).exists()), None)
        if found is None:
            parts.append(f"{name} SKIPPED")
            skipped += 1
            continue
        row = run_entry(BenchmarkEntry(name, path=found, expected_length=bound, time_budget=60, repeats=10, slack=0.0), GaConfig())
        ok &= row.status == "PASS"
        parts.append(f"{name} mean {row.mean_length:.1f} <= {bound}, max {max(row.seconds):.1f}s <= 60s")
    status = "SKIPPED" if skipped == len(DATASETS) else ("PASS" if ok else "FAIL")
    conftest.ACCEPTANCE["4 real-datasets"] = f"{status} ({'; '.join(parts)}; looked in {root})"
    assert ok
    if skipped == len(DATASETS):
        pytest.skip(f"no datasets under {root}")


@pytest.mark.slow
def test_c5_random_models():
    ba = [find_burning_length(generate_barabasi_albert(1000, 3, s), GaConfig(seed=s)).best_length for s in range(1, 11)]
    er = [find_burning_length(generate_erdos_renyi(1000, 6000, s), GaConfig(seed=s)).best_length for s in range(1, 11)]
    ba_mean, er_mean = float(np.mean(ba)), float(np.mean(er))
    ok = ba_mean <= 4.5 and er_mean <= 5.0
    assert record("5 random-models", ok, f"BA mean {ba_mean:.2f} <= 4.5, ER mean {er_mean:.2f} <= 5.0")


def test_c6_middle_matrix():
    rng = np.random.default_rng(6)
    passed = 0
    for i in range(100):
        n = int(rng.integers(2, 201))
        g = connected_gnp(n, min(1.0, float(rng.uniform(1.2, 4.0)) * math.log(n + 1) / n), 10_000 + i)
        d = compute_apsp(g)
        m = compute_middle_matrix(g, d)
        D = d.cells.astype(np.int64)
        mid = m.cells.astype(np.int64)
        rows = np.arange(n)[:, None]
        cols = np.arange(n)[None, :]
        good = np.all(D[rows, mid] + D[mid, cols] == D) and np.all(np.abs(D[rows, mid] - D[mid, cols]) <= 1)
        passed += bool(good)
    assert record("6 middle-matrix", passed == 100, f"{passed}/100 graphs, every pair")


def test_c7_betweenness():
    rng = np.random.default_rng(7)
    worst = 0.0
    for i in range(20):
        g = generate_gnp(int(rng.integers(3, 51)), float(rng.uniform(0.05, 0.5)), 700 + i)
        raw = compute_betweenness(g, "exact").raw
        ref = np.asarray(naive_betweenness(g))
        scale = np.maximum(np.abs(ref), 1e-300)
        err = np.where(ref == 0, np.abs(raw), np.abs(raw - ref) / scale)
        worst = max(worst, float(err.max(initial=0.0)))
    assert record("7 betweenness", worst <= 1e-9, f"max relative error {worst:.2e} <= 1e-9 on 20 graphs")


def test_c8_cost_oracle():
    rng = np.random.default_rng(8)
    mismatches = 0
    for i in range(1000):
        n = int(rng.integers(1, 40))
        g = generate_gnp(n, float(rng.uniform(0.0, 0.4)), 8000 + i)
        b = int(rng.integers(1, min(n, 8) + 1))
        seq = [int(v) for v in rng.integers(0, n, size=b)]
        mismatches += sequence_cost(compute_apsp(g), seq) != cost_def(apsp(g), seq)
    assert record("8 cost-oracle", mismatches == 0, f"{1000 - mismatches}/1000 exact matches")


def test_c9_determinism(tmp_path):
    g = generate_barabasi_albert(300, 2, 9)
    path = tmp_path / "ba300.edges"
    path.write_text("".join(f"{u} {v}\n" for u, v in g.edges()))
    cmd = [sys.executable, "-m", "burnsolver.cli", "solve", "--graph", str(path),
           "--json", "--threads", "1", "--seed", "42"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert record("9 determinism", a == b and len(a) > 0, f"two runs, {len(a)} bytes, identical={a == b}")


def test_c10_precompute_throughput():
    g = generate_erdos_renyi(1258, 7513, 10)
    start = time.perf_counter()
    pre = precompute(g)
    elapsed = time.perf_counter() - start
    ok = elapsed < 10 and pre.dist.n == 1258
    assert record("10 precompute-throughput", ok, f"N=1258 M={g.m} in {elapsed:.2f}s < 10s")
