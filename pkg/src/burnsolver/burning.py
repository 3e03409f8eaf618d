"""Burning-process semantics over a precomputed distance matrix."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph
from .precompute import DistMatrix

UNBURNED = -1
EXACT_ORACLE_LIMIT = 14


class OracleSizeError(ValueError):
    """Graph too large for exhaustive search."""


@dataclass(frozen=True)
class BurningSequence:
    sources: tuple[int, ...]

    @property
    def b(self) -> int:
        return len(self.sources)

    def __len__(self) -> int:
        return len(self.sources)

    def __iter__(self):
        return iter(self.sources)


def _sources(seq: BurningSequence | Sequence[int]) -> list[int]:
    return [int(v) for v in seq]


def burning_distances(dist: DistMatrix, seq: BurningSequence | Sequence[int]) -> np.ndarray:
    """Burning distance of every vertex as float64, ``inf`` with no reachable source."""
    src = _sources(seq)
    if not src:
        return np.full(dist.n, math.inf)
    b = len(src)
    rows = dist.cells[src].astype(np.float64)
    rows[dist.cells[src] == dist.unreachable] = math.inf
    offsets = np.arange(b - 1, -1, -1, dtype=np.float64)[:, None]
    return np.maximum(0.0, (rows - offsets).min(axis=0))


def burning_distance(dist: DistMatrix, seq: BurningSequence | Sequence[int], i: int) -> int | float:
    """Distance from ``i`` to the nearest burned vertex once all ``b`` steps ran.

    Source ``v_j`` (1-based) burns everything within ``b - j`` hops. Returns
    ``math.inf`` when no source shares a component with ``i``.
    """
    src = _sources(seq)
    b = len(src)
    best = math.inf
    for j, v in enumerate(src, start=1):
        d = int(dist.cells[i, v])
        if d == dist.unreachable:
            continue
        best = min(best, d - (b - j))
    if best == math.inf:
        return best
    return max(0, best)


def sequence_cost(dist: DistMatrix, seq: BurningSequence | Sequence[int]) -> int | float:
    """Sum of squared burning distances; ``inf`` if a component has no source."""
    d = burning_distances(dist, seq)
    if np.isinf(d).any():
        return math.inf
    return int((d.astype(np.int64) ** 2).sum())


def sources_are_spaced(dist: DistMatrix, seq: BurningSequence | Sequence[int]) -> bool:
    """``d(v_i, v_j) >= j - i`` for all ``i < j``: nothing fires on burned ground."""
    src = _sources(seq)
    for i in range(len(src)):
        for j in range(i + 1, len(src)):
            d = int(dist.cells[src[i], src[j]])
            if d != dist.unreachable and d < j - i:
                return False
    return True


def is_valid_burning_sequence(dist: DistMatrix, seq: BurningSequence | Sequence[int]) -> bool:
    src = _sources(seq)
    if not src:
        return dist.n == 0
    if any(not 0 <= v < dist.n for v in src):
        return False
    return sources_are_spaced(dist, src) and sequence_cost(dist, src) == 0


def simulate_burn(g: Graph, seq: BurningSequence | Sequence[int]) -> np.ndarray:
    """Step-by-step burning; returns the step each vertex first burned or ``UNBURNED``.

    At each step fire spreads from everything burned before it, then the
    step's source is lit (a source that is already burned adds nothing).
    """
    burned_at = np.full(g.n, UNBURNED, dtype=np.int64)
    frontier: list[int] = []
    for t, v in enumerate(_sources(seq)):
        nxt = []
        for u in frontier:
            for w in g.neighbors(u):
                if burned_at[w] == UNBURNED:
                    burned_at[w] = t
                    nxt.append(int(w))
        if burned_at[v] == UNBURNED:
            burned_at[v] = t
            nxt.append(v)
        frontier = nxt
    return burned_at


def normalize_witness(dist: DistMatrix, seq: Sequence[int | None], b: int | None = None) -> list[int]:
    """Turn a zero-cost plan of up to ``b`` slots into a valid sequence.

    A slot whose source is missing or already burned at its firing step is
    given the lowest-id vertex that is still unburned; once nothing is left
    unburned the sequence stops. Dropping an already-burned source loses no
    coverage, so the result covers whatever the plan covered.
    """
    plan = list(seq)
    if b is None:
        b = len(plan)
    plan += [None] * (b - len(plan))
    big = np.int64(1 << 40)
    cells = dist.cells
    # resid[u] = min_i d(u, v_i) - (t - 1 - i): u is unburned after step t-1 iff > 0.
    resid = np.full(dist.n, big, dtype=np.int64)
    out: list[int] = []
    for v in plan:
        alive = resid > 0
        if not alive.any():
            break
        if v is None or not alive[v]:
            v = int(np.flatnonzero(alive)[0])
        out.append(int(v))
        row = np.where(cells[v] == dist.unreachable, big, cells[v].astype(np.int64))
        resid = np.minimum(resid - 1, row)
    return out


@dataclass(frozen=True)
class OracleResult:
    length: int | None
    witness: tuple[int, ...] | None

    @property
    def found(self) -> bool:
        return self.length is not None


def exact_burning_number(
    g: Graph, dist: DistMatrix, max_len: int | None = None, *, force: bool = False
) -> OracleResult:
    """Smallest burning sequence by exhaustive depth-first search.

    Only vertices unburned at their firing step are tried. A branch is cut
    when the still-uncovered vertices contain more mutually far-apart points
    (pairwise distance above twice the largest remaining radius) than there
    are sources left to place.
    """
    n = g.n
    if n > EXACT_ORACLE_LIMIT and not force:
        raise OracleSizeError(f"exact oracle refuses n={n} > {EXACT_ORACLE_LIMIT}; pass force=True")
    if max_len is None:
        max_len = n
    d = dist.as_int64(inf=10 * n + 10)
    full = (1 << n) - 1
    # ball[v][r]: bitmask of vertices within r hops of v.
    ball = [[sum(1 << u for u in range(n) if d[v, u] <= r) for r in range(max_len + 1)] for v in range(n)]

    def far_points(uncovered: int, radius: int) -> int:
        pts: list[int] = []
        rest = uncovered
        while rest:
            u = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if all(d[u, p] > 2 * radius for p in pts):
                pts.append(u)
        return len(pts)

    def search(k: int, chosen: list[int], covered: int) -> list[int] | None:
        j = len(chosen)
        if j == k:
            return list(chosen) if covered == full else None
        left = k - j
        if far_points(full & ~covered, left - 1) > left:
            return None
        for v in range(n):
            # v must be unburned at step j: d(v, v_i) >= j - i (0-based i).
            if any(d[v, chosen[i]] < j - i for i in range(j)):
                continue
            chosen.append(v)
            found = search(k, chosen, covered | ball[v][k - j - 1])
            chosen.pop()
            if found is not None:
                return found
        return None

    for k in range(1, max_len + 1):
        witness = search(k, [], 0)
        if witness is not None:
            return OracleResult(k, tuple(witness))
    return OracleResult(None, None)
