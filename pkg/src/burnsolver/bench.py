"""Benchmark manifests and the regression table built from them."""
from __future__ import annotations

import dataclasses
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .driver import find_burning_length
from .ga import GaConfig
from .generators import generate_barabasi_albert, generate_erdos_renyi, generate_gnp, path_graph
from .graph import Graph, read_edge_list

logger = logging.getLogger(__name__)

DEFAULT_REPEATS = 10
FRACTIONAL_SLACK = 0.3


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class BenchmarkEntry:
    name: str
    path: Path | None = None
    generator: dict[str, Any] | None = None
    expected_length: float | None = None
    time_budget: float | None = None
    repeats: int = DEFAULT_REPEATS
    seed: int = 1
    slack: float | None = None

    @property
    def tolerance(self) -> float:
        """Allowed excess of the mean over ``expected_length``."""
        if self.slack is not None:
            return self.slack
        if self.expected_length is not None and float(self.expected_length).is_integer():
            return 0.0
        return FRACTIONAL_SLACK


@dataclass(frozen=True)
class BenchmarkManifest:
    entries: tuple[BenchmarkEntry, ...] = ()

    def __post_init__(self) -> None:
        names = [e.name for e in self.entries]
        if len(names) != len(set(names)):
            raise ManifestError("benchmark names must be unique")
        for e in self.entries:
            if e.repeats < 1:
                raise ManifestError(f"{e.name}: repeats must be >= 1")
            if (e.path is None) == (e.generator is None):
                raise ManifestError(f"{e.name}: give exactly one of path or generator")


_KEYS = {
    "name": "name",
    "path": "path",
    "generator": "generator",
    "expectedLength": "expected_length",
    "expected_length": "expected_length",
    "timeBudget": "time_budget",
    "time_budget": "time_budget",
    "repeats": "repeats",
    "seed": "seed",
    "slack": "slack",
}


def parse_manifest(data: Any, base_dir: Path | None = None) -> BenchmarkManifest:
    """Build a manifest from ``{"entries": [...]}`` or a bare list of entries."""
    if data is None:
        return BenchmarkManifest()
    raw = data.get("entries", []) if isinstance(data, dict) else data
    if not isinstance(raw, list):
        raise ManifestError("manifest must be a list of entries or a mapping with 'entries'")
    entries = []
    for item in raw or []:
        if not isinstance(item, dict) or "name" not in item:
            raise ManifestError(f"bad manifest entry: {item!r}")
        unknown = set(item) - set(_KEYS)
        if unknown:
            raise ManifestError(f"{item['name']}: unknown keys {sorted(unknown)}")
        kw = {_KEYS[k]: v for k, v in item.items()}
        if kw.get("path") is not None:
            p = Path(kw["path"])
            kw["path"] = p if p.is_absolute() or base_dir is None else base_dir / p
        entries.append(BenchmarkEntry(**kw))
    return BenchmarkManifest(tuple(entries))


def load_manifest(path: str | Path) -> BenchmarkManifest:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    return parse_manifest(data, path.parent)


def build_graph(spec: dict[str, Any], seed: int) -> Graph:
    model = str(spec.get("model", "")).lower()
    n = int(spec["n"])
    if model in ("ba", "barabasi-albert", "barabasi_albert"):
        return generate_barabasi_albert(n, int(spec.get("attach", 3)), seed)
    if model in ("er", "erdos-renyi", "erdos_renyi", "gnm"):
        return generate_erdos_renyi(n, int(spec["edges"]), seed)
    if model == "gnp":
        return generate_gnp(n, float(spec["p"]), seed)
    if model == "path":
        return path_graph(n)
    raise ManifestError(f"unknown generator model {model!r}")


@dataclass
class BenchmarkRow:
    name: str
    status: str
    n: int | None = None
    m: int | None = None
    lengths: list[int] = field(default_factory=list)
    seconds: list[float] = field(default_factory=list)
    expected_length: float | None = None
    time_budget: float | None = None
    note: str = ""

    @property
    def mean_length(self) -> float | None:
        return sum(self.lengths) / len(self.lengths) if self.lengths else None

    @property
    def mean_seconds(self) -> float | None:
        return sum(self.seconds) / len(self.seconds) if self.seconds else None

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["meanLength"] = self.mean_length
        d["meanSeconds"] = self.mean_seconds
        return d


def run_entry(entry: BenchmarkEntry, cfg: GaConfig) -> BenchmarkRow:
    row = BenchmarkRow(entry.name, "PASS", expected_length=entry.expected_length, time_budget=entry.time_budget)
    fixed: Graph | None = None
    if entry.path is not None:
        if not entry.path.exists():
            row.status, row.note = "SKIPPED", f"missing dataset {entry.path}"
            return row
        fixed = read_edge_list(entry.path)
    for rep in range(entry.repeats):
        seed = entry.seed + rep
        g = fixed if fixed is not None else build_graph(entry.generator or {}, seed)
        start = time.perf_counter()
        report = find_burning_length(g, dataclasses.replace(cfg, seed=seed), name=entry.name)
        row.seconds.append(time.perf_counter() - start)
        row.lengths.append(report.best_length)
        row.n, row.m = g.n, g.m
    failures = []
    if entry.expected_length is not None and row.mean_length > entry.expected_length + entry.tolerance + 1e-9:
        failures.append(f"mean length {row.mean_length:g} > {entry.expected_length:g}")
    if entry.time_budget is not None and max(row.seconds) > entry.time_budget:
        failures.append(f"run time {max(row.seconds):.1f}s > {entry.time_budget:g}s")
    if failures:
        row.status, row.note = "FAIL", "; ".join(failures)
    return row


def run_benchmark(manifest: BenchmarkManifest, cfg: GaConfig | None = None) -> list[BenchmarkRow]:
    cfg = cfg or GaConfig()
    rows = []
    for entry in manifest.entries:
        logger.info("benchmark %s", entry.name)
        rows.append(run_entry(entry, cfg))
    return rows


def format_table(rows: list[BenchmarkRow]) -> str:
    header = ("name", "n", "m", "runs", "mean_len", "expected", "mean_s", "max_s", "status")
    body = []
    for r in rows:
        body.append(
            (
                r.name,
                "" if r.n is None else str(r.n),
                "" if r.m is None else str(r.m),
                str(len(r.lengths)),
                "" if r.mean_length is None else f"{r.mean_length:.2f}",
                "" if r.expected_length is None else f"{r.expected_length:g}",
                "" if r.mean_seconds is None else f"{r.mean_seconds:.2f}",
                "" if not r.seconds else f"{max(r.seconds):.2f}",
                r.status + (f" ({r.note})" if r.note else ""),
            )
        )
    widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for b in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(b, widths)).rstrip())
    return "\n".join(lines)


def rows_to_json(rows: list[BenchmarkRow]) -> str:
    return json.dumps([r.to_dict() for r in rows], indent=2, default=_jsonable)


def _jsonable(obj):
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, float) and math.isnan(obj):
        return None
    raise TypeError(type(obj))
