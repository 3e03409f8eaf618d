"""Graph-wide tables computed once per graph: distances, middles, centrality."""
from __future__ import annotations

import hashlib
import logging
import os
import struct
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

from . import _kernels
from .graph import NO_PARENT, UNREACHABLE, BfsResult, ComponentLabeling, Graph, connected_components

logger = logging.getLogger(__name__)

DEFAULT_MEMORY_BUDGET = 12 * 2**30
EXACT_BETWEENNESS_LIMIT = 2000
DEFAULT_PIVOTS = 512
# Fixed block size keeps float accumulation order independent of thread count.
_BLOCK = 64


class MemoryBudgetError(MemoryError):
    """Matrix allocation would exceed the configured budget."""


def cell_dtype(n: int) -> np.dtype:
    # Any finite distance is < n, so n bounds the diameter as well.
    return np.dtype(np.uint16) if n < np.iinfo(np.uint16).max else np.dtype(np.uint32)


def _check_budget(n: int, dtype: np.dtype, budget: int | None, what: str) -> None:
    need = n * n * dtype.itemsize
    limit = DEFAULT_MEMORY_BUDGET if budget is None else budget
    if need > limit:
        raise MemoryBudgetError(
            f"{what} needs {need / 2**20:.1f} MiB for n={n}, budget is {limit / 2**20:.1f} MiB"
        )


@dataclass(frozen=True)
class DistMatrix:
    """Hop distances; cross-component cells hold ``unreachable``."""

    cells: np.ndarray

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def unreachable(self) -> int:
        return int(np.iinfo(self.cells.dtype).max)

    def __getitem__(self, key):
        return self.cells[key]

    def finite_max(self) -> int:
        finite = self.cells[self.cells != self.unreachable]
        return int(finite.max()) if finite.size else 0

    def as_int64(self, inf: int) -> np.ndarray:
        """Copy with the sentinel replaced by ``inf``."""
        out = self.cells.astype(np.int64)
        out[self.cells == self.unreachable] = inf
        return out


@dataclass(frozen=True)
class MiddleMatrix:
    cells: np.ndarray

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def unreachable(self) -> int:
        return int(np.iinfo(self.cells.dtype).max)

    def __getitem__(self, key):
        return self.cells[key]


@dataclass(frozen=True)
class CentralityVector:
    values: np.ndarray
    mode: Literal["exact", "sampled"]
    sample_count: int
    raw: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class Precomputed:
    graph: Graph
    dist: DistMatrix
    middle: MiddleMatrix
    centrality: CentralityVector
    components: ComponentLabeling
    seconds: float = 0.0


def _row_blocks(n: int, threads: int) -> list[np.ndarray]:
    parts = max(1, min(threads, n)) * 4 if threads > 1 else 1
    return [b for b in np.array_split(np.arange(n, dtype=np.int64), parts) if b.size]


def _run_rows(fn, blocks: list[np.ndarray], threads: int) -> None:
    if threads <= 1 or len(blocks) == 1:
        for blk in blocks:
            fn(blk)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(fn, blocks))


def compute_apsp(g: Graph, *, threads: int = 1, memory_budget: int | None = None) -> DistMatrix:
    """All-pairs hop distances via one BFS per vertex."""
    dtype = cell_dtype(g.n)
    _check_budget(g.n, dtype, memory_budget, "distance matrix")
    out = np.empty((g.n, g.n), dtype=dtype)
    sentinel = int(np.iinfo(dtype).max)
    _run_rows(
        lambda blk: _kernels.apsp_rows(g.indptr, g.indices, blk, out, sentinel),
        _row_blocks(g.n, threads),
        threads,
    )
    out.setflags(write=False)
    return DistMatrix(out)


def compute_middle_row(v: int, dist: DistMatrix, bfs_result: BfsResult, out: np.ndarray) -> np.ndarray:
    """Fill ``out`` (row ``v`` of the middle matrix) from the BFS of ``v``.

    Odd-distance vertices inherit the middle of their BFS parent; for
    even-distance vertices a second pointer walks the BFS order until it
    hits a vertex exactly halfway along a shortest path.
    """
    if bfs_result.source != v:
        raise ValueError("bfs_result must start at v")
    d = dist.cells
    out[:] = np.iinfo(out.dtype).max
    order = bfs_result.order
    parent = bfs_result.parent
    i = j = 0
    while i < len(order):
        u = order[i]
        mid = order[j]
        dvu = int(d[v, u])
        dvm, dmu = int(d[v, mid]), int(d[mid, u])
        if dvu % 2 == 1:
            out[u] = out[parent[u]]
            i += 1
        elif dvm == dmu and dvm + dmu == dvu:
            out[u] = mid
            i += 1
        else:
            j += 1
            assert j <= i, "middle pointer overran the scan pointer"
    return out


def compute_middle_matrix(
    g: Graph, dist: DistMatrix, *, threads: int = 1, memory_budget: int | None = None
) -> MiddleMatrix:
    dtype = dist.cells.dtype
    _check_budget(g.n, dtype, memory_budget, "middle matrix")
    out = np.empty((g.n, g.n), dtype=dtype)
    sentinel = int(np.iinfo(dtype).max)
    _run_rows(
        lambda blk: _kernels.middle_rows(g.indptr, g.indices, blk, dist.cells, out, sentinel),
        _row_blocks(g.n, threads),
        threads,
    )
    out.setflags(write=False)
    return MiddleMatrix(out)


def raw_betweenness(g: Graph, sources: np.ndarray, *, threads: int = 1) -> np.ndarray:
    """Dependency sums over ``sources``, halved for undirected pairs."""
    sources = np.asarray(sources, dtype=np.int64)
    blocks = [sources[i:i + _BLOCK] for i in range(0, len(sources), _BLOCK)]
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda blk: _kernels.brandes_partial(g.indptr, g.indices, blk), blocks))
    else:
        parts = [_kernels.brandes_partial(g.indptr, g.indices, blk) for blk in blocks]
    total = np.zeros(g.n)
    for p in parts:
        total += p
    return total / 2.0


def normalize_per_component(raw: np.ndarray, comps: ComponentLabeling) -> np.ndarray:
    """Divide by each component's maximum.

    Components with fewer than three vertices, or whose maximum is zero,
    get 1 everywhere so every component keeps a chance of being sampled.
    """
    values = np.ones_like(raw, dtype=np.float64)
    for c in range(comps.count):
        idx = comps.members(c)
        if comps.component_sizes[c] < 3:
            continue
        top = raw[idx].max()
        if top > 0:
            values[idx] = raw[idx] / top
    return values


def compute_betweenness(
    g: Graph,
    mode: Literal["exact", "sampled", "auto"] = "auto",
    pivots: int = DEFAULT_PIVOTS,
    seed: int = 0,
    *,
    threads: int = 1,
    components: ComponentLabeling | None = None,
) -> CentralityVector:
    """Betweenness normalized per connected component.

    ``auto`` is exact up to ``EXACT_BETWEENNESS_LIMIT`` vertices and
    pivot-sampled beyond. Sampled sums are rescaled by ``n / pivots``.
    """
    if mode == "auto":
        mode = "exact" if g.n <= EXACT_BETWEENNESS_LIMIT else "sampled"
    if mode == "exact":
        sources = np.arange(g.n, dtype=np.int64)
        raw = raw_betweenness(g, sources, threads=threads)
        count = g.n
    elif mode == "sampled":
        if pivots < 1:
            raise ValueError("pivots must be >= 1")
        count = min(pivots, g.n)
        rng = np.random.default_rng(seed)
        sources = np.sort(rng.choice(g.n, size=count, replace=False)).astype(np.int64)
        raw = raw_betweenness(g, sources, threads=threads)
        if count < g.n:
            raw = raw * (g.n / count)
    else:
        raise ValueError(f"unknown betweenness mode {mode!r}")
    comps = components if components is not None else connected_components(g)
    values = normalize_per_component(raw, comps)
    return CentralityVector(values=values, mode=mode, sample_count=count, raw=raw)


def precompute(
    g: Graph,
    *,
    threads: int = 1,
    betweenness: Literal["exact", "sampled", "auto"] = "auto",
    pivots: int = DEFAULT_PIVOTS,
    seed: int = 0,
    memory_budget: int | None = None,
    cache_dir: str | os.PathLike | None = None,
) -> Precomputed:
    """Run every b-independent computation, optionally through a disk cache."""
    start = time.perf_counter()
    comps = connected_components(g)
    key = None
    if cache_dir is not None:
        key = cache_key(g, betweenness, pivots, seed)
        hit = load_cache(Path(cache_dir), key, g.n)
        if hit is not None:
            dist, middle, cent = hit
            logger.info("precompute cache hit %s", key[:12])
            return Precomputed(g, dist, middle, cent, comps, time.perf_counter() - start)
    dist = compute_apsp(g, threads=threads, memory_budget=memory_budget)
    middle = compute_middle_matrix(g, dist, threads=threads, memory_budget=memory_budget)
    cent = compute_betweenness(g, betweenness, pivots, seed, threads=threads, components=comps)
    if cache_dir is not None and key is not None:
        save_cache(Path(cache_dir), key, dist, middle, cent)
    return Precomputed(g, dist, middle, cent, comps, time.perf_counter() - start)


# --- binary cache ---------------------------------------------------------

CACHE_MAGIC = b"BURNPRE\x00"
CACHE_VERSION = 1
_HEADER = struct.Struct("<8sIQB7sQ32s")  # magic, version, n, width, mode, pivots, sha256


def cache_key(g: Graph, mode: str, pivots: int, seed: int) -> str:
    h = hashlib.sha256(g.content_hash().encode())
    h.update(f"|{mode}|{pivots}|{seed}|v{CACHE_VERSION}".encode())
    return h.hexdigest()


def save_cache(directory: Path, key: str, dist: DistMatrix, middle: MiddleMatrix, cent: CentralityVector) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    payload = b"".join(
        [
            dist.cells.tobytes(),
            middle.cells.tobytes(),
            cent.values.astype("<f8").tobytes(),
            cent.raw.astype("<f8").tobytes(),
        ]
    )
    header = _HEADER.pack(
        CACHE_MAGIC,
        CACHE_VERSION,
        dist.n,
        dist.cells.dtype.itemsize,
        cent.mode.encode().ljust(7, b"\x00"),
        cent.sample_count,
        hashlib.sha256(payload).digest(),
    )
    path = directory / f"{key}.bin"
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(payload)
    os.replace(tmp, path)
    return path


def load_cache(directory: Path, key: str, n: int) -> tuple[DistMatrix, MiddleMatrix, CentralityVector] | None:
    path = directory / f"{key}.bin"
    if not path.exists():
        return None
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        return None
    magic, version, cn, width, mode, count, digest = _HEADER.unpack_from(data)
    payload = data[_HEADER.size:]
    if magic != CACHE_MAGIC or version != CACHE_VERSION or cn != n:
        logger.warning("ignoring incompatible cache file %s", path)
        return None
    if hashlib.sha256(payload).digest() != digest:
        logger.warning("checksum mismatch in cache file %s", path)
        return None
    dtype = np.dtype(np.uint16) if width == 2 else np.dtype(np.uint32)
    cells = n * n
    off = 0
    dist = np.frombuffer(payload, dtype=dtype, count=cells, offset=off).reshape(n, n)
    off += cells * width
    middle = np.frombuffer(payload, dtype=dtype, count=cells, offset=off).reshape(n, n)
    off += cells * width
    values = np.frombuffer(payload, dtype="<f8", count=n, offset=off).copy()
    off += n * 8
    raw = np.frombuffer(payload, dtype="<f8", count=n, offset=off).copy()
    cent = CentralityVector(values, mode.rstrip(b"\x00").decode(), int(count), raw)  # type: ignore[arg-type]
    return DistMatrix(dist), MiddleMatrix(middle), cent


__all__ = [
    "CentralityVector",
    "DistMatrix",
    "MemoryBudgetError",
    "MiddleMatrix",
    "NO_PARENT",
    "Precomputed",
    "UNREACHABLE",
    "compute_apsp",
    "compute_betweenness",
    "compute_middle_matrix",
    "compute_middle_row",
    "precompute",
]
