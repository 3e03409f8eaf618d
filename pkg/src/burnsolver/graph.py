"""Undirected simple graphs in CSR form, edge-list parsing and traversal."""
from __future__ import annotations

import io
import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Sequence, TextIO

import numpy as np

logger = logging.getLogger(__name__)

# Reserved "no parent" marker in BFS results; distances use UNREACHABLE.
NO_PARENT = -1
UNREACHABLE = np.iinfo(np.int64).max


class GraphParseError(ValueError):
    """Raised for malformed edge-list input."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph with dense ids ``0..n-1``.

    ``indptr``/``indices`` hold the adjacency in CSR layout with every
    neighbor list sorted ascending. ``labels[i]`` is the external token of
    vertex ``i``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple[str, ...]
    _label_index: dict[str, int] = field(default=None, repr=False, compare=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        if self._label_index is None:
            object.__setattr__(self, "_label_index", {lab: i for i, lab in enumerate(self.labels)})

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[Hashable] | None = None,
    ) -> "Graph":
        """Build a graph from dense-id edges. Self-loops and duplicates are dropped."""
        if n < 1:
            raise ValueError("graph must have at least one vertex")
        pairs = {(min(u, v), max(u, v)) for u, v in edges if u != v}
        for u, v in pairs:
            if u < 0 or v >= n:
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        if pairs:
            arr = np.array(sorted(pairs), dtype=np.int64)
            src = np.concatenate([arr[:, 0], arr[:, 1]])
            dst = np.concatenate([arr[:, 1], arr[:, 0]])
        else:
            src = dst = np.empty(0, dtype=np.int64)
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        if labels is None:
            labels = range(n)
        labs = tuple(str(x) for x in labels)
        if len(labs) != n:
            raise ValueError("labels length must equal n")
        return cls(indptr=indptr, indices=dst.astype(np.int32), labels=labs)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(v).tolist() for v in range(self.n)]

    def edges(self) -> list[tuple[int, int]]:
        """Each undirected edge once, as ``(u, v)`` with ``u < v``."""
        out = []
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    out.append((u, int(v)))
        return out

    def vertex_id(self, label: Hashable) -> int:
        return self._label_index[str(label)]

    def ids(self, labels: Iterable[Hashable]) -> list[int]:
        return [self.vertex_id(x) for x in labels]

    def label_of(self, ids: Iterable[int]) -> list[str]:
        return [self.labels[i] for i in ids]

    def content_hash(self) -> str:
        import hashlib

        h = hashlib.sha256()
        h.update(np.asarray(self.indptr, dtype=np.int64).tobytes())
        h.update(np.asarray(self.indices, dtype=np.int32).tobytes())
        return h.hexdigest()


def parse_edge_list(text: str | TextIO) -> Graph:
    """Parse a whitespace-separated edge list.

    Lines starting with ``#`` or ``%`` are comments. If the input carries a
    Matrix Market banner (``%%MatrixMarket``), the size line that follows
    the comments is skipped and trailing value columns are ignored.
    Labels get dense ids in order of first appearance.
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    index: dict[str, int] = {}
    labels: list[str] = []
    edges: list[tuple[int, int]] = []
    matrix_market = False
    size_line_pending = False
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("%%"):
            if line.lower().startswith("%%matrixmarket"):
                matrix_market = size_line_pending = True
            continue
        if line[0] in "#%":
            continue
        tokens = line.split()
        if size_line_pending:
            size_line_pending = False
            continue
        if len(tokens) != 2 and not (matrix_market and len(tokens) > 2):
            raise GraphParseError(f"line {lineno}: expected 2 tokens, got {len(tokens)}")
        ids = []
        for tok in tokens[:2]:
            if tok not in index:
                index[tok] = len(labels)
                labels.append(tok)
            ids.append(index[tok])
        edges.append((ids[0], ids[1]))
    if not labels:
        raise GraphParseError("empty graph: no vertices found")

    loops = sum(1 for u, v in edges if u == v)
    unique = {(min(u, v), max(u, v)) for u, v in edges if u != v}
    dupes = len(edges) - loops - len(unique)
    if loops or dupes:
        logger.warning("dropped %d self-loop(s) and %d duplicate edge(s)", loops, dupes)
    return Graph.from_edges(len(labels), unique, labels)


def read_edge_list(path: str | Path) -> Graph:
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        return parse_edge_list(fh)


def format_edge_list(g: Graph, header: bool = True) -> str:
    """Serialize ``g`` as an edge list using its external labels.

    Isolated vertices are written as ``v v`` lines: the parser registers the
    label and drops the self-loop, so the vertex count survives a round trip.
    """
    lines = [f"# vertices: {g.n} edges: {g.m}"] if header else []
    lines += [f"{g.labels[u]} {g.labels[v]}" for u, v in g.edges()]
    lines += [f"{g.labels[v]} {g.labels[v]}" for v in range(g.n) if g.degree(v) == 0]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ComponentLabeling:
    component_of: np.ndarray
    component_sizes: np.ndarray

    @property
    def count(self) -> int:
        return len(self.component_sizes)

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.component_of == c)


def connected_components(g: Graph) -> ComponentLabeling:
    """Label components; ids follow the smallest vertex id they contain."""
    comp = np.full(g.n, -1, dtype=np.int64)
    sizes = []
    for start in range(g.n):
        if comp[start] >= 0:
            continue
        cid = len(sizes)
        comp[start] = cid
        queue = deque([start])
        size = 0
        while queue:
            u = queue.popleft()
            size += 1
            for w in g.neighbors(u):
                if comp[w] < 0:
                    comp[w] = cid
                    queue.append(int(w))
        sizes.append(size)
    return ComponentLabeling(comp, np.array(sizes, dtype=np.int64))


@dataclass(frozen=True)
class BfsResult:
    """Visitation order, BFS-tree parents and hop distances from ``source``.

    Unreachable vertices have ``dist == UNREACHABLE`` and
    ``parent == NO_PARENT``; the source is its own parent.
    """

    source: int
    order: np.ndarray
    parent: np.ndarray
    dist: np.ndarray


def bfs(g: Graph, source: int) -> BfsResult:
    if not 0 <= source < g.n:
        raise IndexError(f"source {source} out of range [0, {g.n})")
    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    parent = np.full(g.n, NO_PARENT, dtype=np.int64)
    dist[source] = 0
    parent[source] = source
    order = [source]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for w in g.neighbors(u):
            if dist[w] == UNREACHABLE:
                dist[w] = dist[u] + 1
                parent[w] = u
                order.append(int(w))
    return BfsResult(source, np.array(order, dtype=np.int64), parent, dist)
