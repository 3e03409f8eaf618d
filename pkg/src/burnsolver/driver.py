"""Decision procedure and binary search for the shortest burning sequence."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .burning import is_valid_burning_sequence, normalize_witness
from .ga import GaConfig, run_ga
from .graph import Graph
from .precompute import Precomputed, precompute

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Decision:
    b: int
    found: bool
    generations: int
    seconds: float
    witness: tuple[int, ...] | None = None


@dataclass
class SolveReport:
    graph_name: str
    n: int
    m: int
    best_length: int
    witness: tuple[int, ...]
    decisions: list[Decision]
    precompute_seconds: float
    total_seconds: float
    seed: int
    config: GaConfig
    upper_bound: int = 0
    precompute_calls: int = 1

    @property
    def generations(self) -> int:
        return sum(d.generations for d in self.decisions)

    def to_json_dict(self, graph: Graph, *, timing: bool = True) -> dict:
        """Result record; witness vertices are given by their external labels."""
        return {
            "graph": self.graph_name,
            "n": self.n,
            "m": self.m,
            "bestLength": self.best_length,
            "witness": [json_label(graph.labels[v]) for v in self.witness],
            "generations": self.generations,
            "precomputeMs": round(self.precompute_seconds * 1000, 3) if timing else None,
            "solveMs": round(self.total_seconds * 1000, 3) if timing else None,
            "seed": self.seed,
            "upperBound": self.upper_bound,
            "decisions": [
                {"b": d.b, "found": d.found, "generations": d.generations}
                | ({"ms": round(d.seconds * 1000, 3)} if timing else {})
                for d in self.decisions
            ],
            "config": self.config.to_dict(),
        }


def json_label(label: str) -> int | str:
    try:
        value = int(label)
    except ValueError:
        return label
    return value if str(value) == label else label


def probe_seed(seed: int, b: int) -> np.random.SeedSequence:
    """Independent, reproducible stream for the probe at length ``b``."""
    return np.random.SeedSequence([seed, b])


def cbag_decision(
    g: Graph, pre: Precomputed, b: int, cfg: GaConfig, rng: np.random.Generator | None = None
) -> Decision:
    """Search for a burning sequence of length at most ``b``.

    ``found=False`` only means the search gave up; it is not a proof that
    no such sequence exists.
    """
    if b < 1:
        raise ValueError("b must be >= 1")
    if rng is None:
        rng = np.random.default_rng(probe_seed(cfg.seed, b))
    start = time.perf_counter()
    res = run_ga(g, pre.dist, pre.middle, pre.centrality, b, cfg, rng, components=pre.components)
    elapsed = time.perf_counter() - start
    logger.info("b=%d found=%s generations=%d (%.2fs)", b, res.found, res.generations, elapsed)
    return Decision(b, res.found, res.generations, elapsed, res.witness)


def center_sequence(pre: Precomputed) -> tuple[int, ...]:
    """A valid sequence built from one minimum-eccentricity vertex per component.

    Centers fire in decreasing order of eccentricity, so the ``j``-th one
    needs ``ecc_j + j`` steps; the sequence length is the worst of these,
    with leftover slots given to still-unburned vertices.
    """
    comps = pre.components
    cells = pre.dist.cells
    centers = []
    for c in range(comps.count):
        members = comps.members(c)
        ecc = cells[np.ix_(members, members)].max(axis=1).astype(np.int64)
        best = int(np.argmin(ecc))  # first minimum = smallest vertex id
        centers.append((int(ecc[best]), int(members[best])))
    centers.sort(key=lambda t: (-t[0], t[1]))
    k = max(ecc + j for j, (ecc, _) in enumerate(centers, start=1))
    seq = normalize_witness(pre.dist, [v for _, v in centers], k)
    assert is_valid_burning_sequence(pre.dist, seq)
    return tuple(seq)


def find_burning_length(
    g: Graph,
    cfg: GaConfig | None = None,
    *,
    name: str = "graph",
    pre: Precomputed | None = None,
    cache_dir=None,
) -> SolveReport:
    """Binary search on ``b`` over the GA decision procedure.

    The centers sequence gives the initial upper bound. When the search
    ends without having tried ``best - 1``, that length is probed too.
    """
    cfg = cfg or GaConfig()
    start = time.perf_counter()
    calls = 0
    if pre is None:
        pre = precompute(g, threads=cfg.threads, seed=cfg.seed, cache_dir=cache_dir)
        calls = 1
    pre_seconds = pre.seconds

    best = center_sequence(pre)
    upper = len(best)
    decisions: list[Decision] = []
    tried: dict[int, Decision] = {}

    def probe(b: int) -> Decision:
        dec = cbag_decision(g, pre, b, cfg)
        tried[b] = dec
        decisions.append(dec)
        return dec

    lo, hi = 1, upper
    while lo < hi:
        mid = (lo + hi) // 2
        dec = probe(mid)
        if dec.found:
            best = dec.witness
            hi = len(best)
        else:
            lo = mid + 1
    while len(best) > 1 and (len(best) - 1) not in tried:
        dec = probe(len(best) - 1)
        if not dec.found:
            break
        best = dec.witness

    return SolveReport(
        graph_name=name,
        n=g.n,
        m=g.m,
        best_length=len(best),
        witness=tuple(best),
        decisions=decisions,
        precompute_seconds=pre_seconds,
        total_seconds=time.perf_counter() - start,
        seed=cfg.seed,
        config=cfg,
        upper_bound=upper,
        precompute_calls=calls,
    )
