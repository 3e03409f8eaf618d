"""Seeded random graph models."""
from __future__ import annotations

import numpy as np

from .graph import Graph


def generate_barabasi_albert(n: int, attach: int, seed: int | None = None) -> Graph:
    """Preferential attachment grown from a clique on ``attach + 1`` vertices.

    Every later vertex links to ``attach`` distinct earlier vertices chosen
    with probability proportional to their current degree, so the graph has
    ``C(attach + 1, 2) + attach * (n - attach - 1)`` edges.
    """
    if attach < 1:
        raise ValueError("attach must be >= 1")
    if n <= attach:
        raise ValueError("n must exceed attach")
    rng = np.random.default_rng(seed)
    core = attach + 1
    edges = [(u, v) for u in range(core) for v in range(u + 1, core)]
    # Each vertex appears once per incident edge end.
    ends = [v for e in edges for v in e]
    for new in range(core, n):
        targets: list[int] = []
        while len(targets) < attach:
            t = ends[int(rng.integers(len(ends)))]
            if t not in targets:
                targets.append(t)
        for t in targets:
            edges.append((t, new))
            ends.extend((t, new))
    return Graph.from_edges(n, edges)


def generate_erdos_renyi(n: int, m_edges: int, seed: int | None = None) -> Graph:
    """Uniform G(n, M): ``m_edges`` distinct edges drawn without replacement."""
    total = n * (n - 1) // 2
    if n < 1 or m_edges < 0 or m_edges > total:
        raise ValueError(f"need 0 <= m_edges <= {total} for n={n}")
    rng = np.random.default_rng(seed)
    if total <= 5_000_000:
        iu, ju = np.triu_indices(n, 1)
        pick = rng.choice(total, size=m_edges, replace=False)
        edges = zip(iu[pick].tolist(), ju[pick].tolist())
    else:
        chosen: set[tuple[int, int]] = set()
        while len(chosen) < m_edges:
            u, v = (int(x) for x in rng.integers(n, size=2))
            if u != v:
                chosen.add((min(u, v), max(u, v)))
        edges = iter(sorted(chosen))
    return Graph.from_edges(n, edges)


def generate_gnp(n: int, p: float, seed: int | None = None) -> Graph:
    """G(n, p): each pair joined independently with probability ``p``."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
