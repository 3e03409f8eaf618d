"""Centrality-seeded genetic search for burning-sequence prefixes.

A chromosome holds only the first ``chr_size`` fire sources. Evaluation
brute-forces the remaining ``b - chr_size`` sources over the vertices the
prefix leaves unburned and scores the best completion by the sum of
squared burning distances.
"""
from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .burning import is_valid_burning_sequence, normalize_witness
from .graph import ComponentLabeling, Graph, connected_components
from .precompute import CentralityVector, DistMatrix, MiddleMatrix

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class GaConfig:
    """Hyperparameters. ``chr_size``/``min_dist`` of ``None`` derive from ``b``."""

    chr_size: int | None = None
    chr_size_offset: int = 3
    min_dist: int | None = None
    skip_number: int = 20
    pop_size: int = 300
    max_generations: int = 500
    crossover_population: int = 500
    mutation_prob: float = 0.1
    alpha: float = 0.05
    beta: float = 200.0
    seed: int = 0
    inf_cost: int | None = None
    threads: int = 1

    def __post_init__(self) -> None:
        if self.chr_size is not None and self.chr_size < 1:
            raise ValueError("chr_size must be >= 1")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must be in [0, 1]")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.pop_size < 1 or self.crossover_population < 1:
            raise ValueError("pop_size and crossover_population must be >= 1")
        if self.max_generations < 0 or self.skip_number < 0:
            raise ValueError("max_generations and skip_number must be non-negative")

    def for_length(self, b: int, n: int | None = None) -> "GaConfig":
        """Fill in the b-dependent sizes."""
        size = self.chr_size if self.chr_size is not None else max(1, b - self.chr_size_offset)
        size = min(size, b)
        if n is not None:
            size = min(size, n)
        min_dist = self.min_dist if self.min_dist is not None else size
        return dataclasses.replace(self, chr_size=size, min_dist=min_dist)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def default_inf_cost(dist: DistMatrix) -> int:
    return dist.n * (dist.finite_max() + 1) ** 2 + 1


@dataclass
class Chromosome:
    prefix: tuple[int, ...]
    cost: int | None = None
    completion: tuple[int, ...] = ()
    unburned: int | None = None

    @property
    def evaluated(self) -> bool:
        return self.cost is not None

    @property
    def sequence(self) -> tuple[int, ...]:
        return self.prefix + self.completion


@dataclass(frozen=True)
class EvalResult:
    cost: int
    completion: tuple[int, ...]
    unburned_count: int


# --- sampling ---------------------------------------------------------------


def sigmoid_weights(values: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    x = beta * (np.asarray(values, dtype=np.float64) - alpha)
    return 1.0 / (1.0 + np.exp(-x))


def _draw(weights: np.ndarray, rng: np.random.Generator) -> int:
    cum = np.cumsum(weights)
    total = cum[-1]
    if not total > 0:
        raise ValueError("no vertex available for sampling")
    idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
    idx = min(idx, len(weights) - 1)
    while weights[idx] <= 0:
        idx -= 1
    return idx


def sample_vertex(
    centrality: CentralityVector | np.ndarray,
    excluded: np.ndarray | Iterable[int] | None,
    alpha: float,
    beta: float,
    rng: np.random.Generator,
) -> int:
    """Draw a vertex with probability proportional to ``sigmoid(beta * (c - alpha))``.

    ``excluded`` (boolean mask or vertex ids) gets probability zero.
    """
    values = centrality.values if isinstance(centrality, CentralityVector) else np.asarray(centrality)
    weights = sigmoid_weights(values, alpha, beta)
    return _draw(weights * ~_as_mask(excluded, len(values)), rng)


def _as_mask(excluded, n: int) -> np.ndarray:
    if excluded is None:
        return np.zeros(n, dtype=bool)
    arr = np.asarray(excluded)
    if arr.dtype == bool and arr.shape == (n,):
        return arr
    mask = np.zeros(n, dtype=bool)
    mask[np.asarray(list(excluded), dtype=np.int64)] = True
    return mask


class ComponentSampler:
    """Sigmoid-weighted sampling restricted to one connected component."""

    def __init__(self, weights: np.ndarray, components: ComponentLabeling):
        self.weights = weights
        self.component_of = components.component_of
        self.order = np.argsort(components.component_of, kind="stable")
        self.cum = np.cumsum(weights[self.order])
        ends = np.cumsum(components.component_sizes)
        self.start = ends - components.component_sizes
        self.end = ends

    def draw_in_component_of(self, vertices: np.ndarray, u: np.ndarray) -> np.ndarray:
        comp = self.component_of[vertices]
        lo_idx, hi_idx = self.start[comp], self.end[comp]
        base = np.where(lo_idx > 0, self.cum[np.maximum(lo_idx - 1, 0)], 0.0)
        top = self.cum[hi_idx - 1]
        target = base + u * (top - base)
        idx = np.searchsorted(self.cum, target, side="right")
        idx = np.clip(idx, lo_idx, hi_idx - 1)
        return self.order[idx]


# --- operators --------------------------------------------------------------


def init_chromosome(
    g: Graph,
    dist: DistMatrix,
    centrality: CentralityVector,
    cfg: GaConfig,
    rng: np.random.Generator,
    *,
    weights: np.ndarray | None = None,
) -> Chromosome:
    """Sample a prefix source by source, keeping sources ``min_dist`` apart.

    When no vertex is far enough from the sources already chosen, the
    distance requirement drops by one for the rest of this chromosome.
    """
    size = cfg.chr_size if cfg.chr_size is not None else 1
    if size > g.n:
        raise ValueError(f"chr_size {size} exceeds vertex count {g.n}")
    if weights is None:
        weights = sigmoid_weights(centrality.values, cfg.alpha, cfg.beta)
    min_dist = cfg.min_dist if cfg.min_dist is not None else size
    cells = dist.cells
    chosen: list[int] = []
    for _ in range(size):
        while True:
            if chosen and min_dist > 0:
                w = np.where((cells[chosen] < min_dist).any(axis=0), 0.0, weights)
            else:
                w = weights
            if w.any():
                chosen.append(_draw(w, rng))
                break
            min_dist -= 1
    return Chromosome(tuple(chosen))


def select(population: Sequence[Chromosome], rng: np.random.Generator) -> Chromosome:
    """Roulette wheel with weight ``1 / (cost + 1)``."""
    costs = np.array([c.cost for c in population], dtype=np.float64)
    return population[int(_roulette(costs, 1, rng)[0])]


def _roulette(costs: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    w = 1.0 / (np.asarray(costs, dtype=np.float64) + 1.0)
    return rng.choice(len(w), size=k, p=w / w.sum())


def crossover_batch(
    p1: np.ndarray, p2: np.ndarray, middle: MiddleMatrix, rng: np.random.Generator
) -> np.ndarray:
    mids = middle.cells[p1, p2].astype(np.int64)
    has_mid = mids != middle.unreachable
    u = rng.random(p1.shape)
    opt = np.where(has_mid, np.floor(u * 3), np.floor(u * 2)).astype(np.int64)
    return np.where(opt == 0, p1, np.where(opt == 1, p2, mids))


def crossover(p1: Chromosome, p2: Chromosome, middle: MiddleMatrix, rng: np.random.Generator) -> Chromosome:
    """Per position: first parent, second parent or their middle vertex, uniformly.

    Positions whose parent sources lie in different components choose
    between the two parents only.
    """
    if len(p1.prefix) != len(p2.prefix):
        raise ValueError("parents must have the same chromosome size")
    a = np.array([p1.prefix], dtype=np.int64)
    b = np.array([p2.prefix], dtype=np.int64)
    return Chromosome(tuple(int(v) for v in crossover_batch(a, b, middle, rng)[0]))


def mutate_neighbor_batch(pop: np.ndarray, g: Graph, prob: float, rng: np.random.Generator) -> np.ndarray:
    mask = rng.random(pop.shape) < prob
    u = rng.random(pop.shape)
    if not mask.any():
        return pop
    out = pop.copy()
    v = pop[mask]
    deg = g.indptr[v + 1] - g.indptr[v]
    movable = deg > 0
    pick = np.minimum(np.floor(u[mask] * deg).astype(np.int64), deg - 1)
    repl = v.copy()
    repl[movable] = g.indices[g.indptr[v[movable]] + pick[movable]]
    out[mask] = repl
    return out


def mutate_neighbor(c: Chromosome, g: Graph, cfg: GaConfig, rng: np.random.Generator) -> Chromosome:
    """Move each selected source to a uniformly chosen neighbor."""
    arr = mutate_neighbor_batch(np.array([c.prefix], dtype=np.int64), g, cfg.mutation_prob, rng)
    return Chromosome(tuple(int(v) for v in arr[0]))


def mutate_resample_batch(
    pop: np.ndarray, sampler: ComponentSampler, prob: float, rng: np.random.Generator
) -> np.ndarray:
    mask = rng.random(pop.shape) < prob
    u = rng.random(pop.shape)
    if not mask.any():
        return pop
    out = pop.copy()
    out[mask] = sampler.draw_in_component_of(pop[mask], u[mask])
    return out


def mutate_resample(
    c: Chromosome,
    centrality: CentralityVector,
    cfg: GaConfig,
    rng: np.random.Generator,
    *,
    components: ComponentLabeling | None = None,
    graph: Graph | None = None,
) -> Chromosome:
    """Replace each selected source with a centrality-weighted vertex of its component."""
    if components is None:
        if graph is None:
            n = len(centrality.values)
            components = ComponentLabeling(np.zeros(n, dtype=np.int64), np.array([n]))
        else:
            components = connected_components(graph)
    sampler = ComponentSampler(sigmoid_weights(centrality.values, cfg.alpha, cfg.beta), components)
    arr = mutate_resample_batch(np.array([c.prefix], dtype=np.int64), sampler, cfg.mutation_prob, rng)
    return Chromosome(tuple(int(v) for v in arr[0]))


# --- evaluation -------------------------------------------------------------


def _evaluate_prefix(dist: DistMatrix, prefix: np.ndarray, b: int, skip: int, inf_cost: int) -> EvalResult:
    cost, suffix, count = _kernels.complete_prefix(
        dist.cells, prefix, b, skip, dist.unreachable, 2 * dist.n + 2
    )
    cost = int(cost)
    # -1: skipped (too many unburned), -2: no spaced completion exists.
    if cost < 0:
        return EvalResult(inf_cost, (), int(count))
    return EvalResult(cost, tuple(int(v) for v in suffix), int(count))


def evaluate(chromosome: Chromosome, g: Graph, dist: DistMatrix, b: int, cfg: GaConfig) -> EvalResult:
    """Cost of the best completion of ``chromosome`` to a length-``b`` sequence.

    Prefixes leaving more than ``skip_number`` vertices unburned are not
    searched and score ``inf_cost``. If fewer unburned vertices remain
    than open slots, the completion is shorter than ``b - chr_size``.
    """
    if b < len(chromosome.prefix):
        raise ValueError("b must be at least the chromosome size")
    inf_cost = cfg.inf_cost if cfg.inf_cost is not None else default_inf_cost(dist)
    prefix = np.asarray(chromosome.prefix, dtype=np.int64)
    res = _evaluate_prefix(dist, prefix, b, cfg.skip_number, inf_cost)
    chromosome.cost, chromosome.completion, chromosome.unburned = res.cost, res.completion, res.unburned_count
    return res


# --- main loop --------------------------------------------------------------


@dataclass
class GaResult:
    found: bool
    witness: tuple[int, ...] | None
    generations: int
    best_cost: int
    best_history: list[int] = field(default_factory=list)
    evaluations: int = 0


class _Evaluator:
    def __init__(self, dist: DistMatrix, b: int, cfg: GaConfig, inf_cost: int):
        self.dist, self.b, self.cfg, self.inf_cost = dist, b, cfg, inf_cost
        self.cache: dict[bytes, EvalResult] = {}
        self.pool = ThreadPoolExecutor(cfg.threads) if cfg.threads > 1 else None

    def __call__(self, pop: np.ndarray) -> np.ndarray:
        keys = [row.tobytes() for row in pop]
        todo = {k: row for k, row in zip(keys, pop) if k not in self.cache}
        if todo:
            fn = lambda row: _evaluate_prefix(self.dist, row, self.b, self.cfg.skip_number, self.inf_cost)
            rows = list(todo.values())
            results = list(self.pool.map(fn, rows)) if self.pool else [fn(r) for r in rows]
            self.cache.update(zip(todo.keys(), results))
        return np.array([self.cache[k].cost for k in keys], dtype=np.int64)

    def close(self) -> None:
        if self.pool:
            self.pool.shutdown()


def run_ga(
    g: Graph,
    dist: DistMatrix,
    middle: MiddleMatrix,
    centrality: CentralityVector,
    b: int,
    cfg: GaConfig,
    rng: np.random.Generator,
    *,
    components: ComponentLabeling | None = None,
    on_generation=None,
) -> GaResult:
    """Evolve prefixes until some completion burns the whole graph in ``b`` steps.

    Each generation breeds ``crossover_population`` offspring from
    roulette-selected parents, applies both mutations, and keeps the best
    ``pop_size`` of parents plus offspring (stable on ties).
    """
    if b < 1:
        raise ValueError("b must be >= 1")
    cfg = cfg.for_length(b, g.n)
    inf_cost = cfg.inf_cost if cfg.inf_cost is not None else default_inf_cost(dist)
    comps = components if components is not None else connected_components(g)
    weights = sigmoid_weights(centrality.values, cfg.alpha, cfg.beta)
    sampler = ComponentSampler(weights, comps)
    evaluator = _Evaluator(dist, b, cfg, inf_cost)

    try:
        pop = np.array(
            [init_chromosome(g, dist, centrality, cfg, rng, weights=weights).prefix for _ in range(cfg.pop_size)],
            dtype=np.int64,
        ).reshape(cfg.pop_size, cfg.chr_size)
        costs = evaluator(pop)
        history = [int(costs.min())]
        gen = 0
        while True:
            witness = _witness(pop, costs, evaluator, dist, b)
            if witness is not None:
                return GaResult(True, witness, gen, 0, history, len(evaluator.cache))
            if gen >= cfg.max_generations:
                break
            gen += 1
            parents = _roulette(costs, 2 * cfg.crossover_population, rng).reshape(-1, 2)
            kids = crossover_batch(pop[parents[:, 0]], pop[parents[:, 1]], middle, rng)
            kids = mutate_neighbor_batch(kids, g, cfg.mutation_prob, rng)
            kids = mutate_resample_batch(kids, sampler, cfg.mutation_prob, rng)
            kid_costs = evaluator(kids)
            merged = np.concatenate([pop, kids])
            merged_costs = np.concatenate([costs, kid_costs])
            keep = np.argsort(merged_costs, kind="stable")[: cfg.pop_size]
            pop, costs = merged[keep], merged_costs[keep]
            history.append(int(costs[0]))
            if on_generation is not None:
                on_generation(gen, pop, costs)
        return GaResult(False, None, gen, int(costs.min()), history, len(evaluator.cache))
    finally:
        evaluator.close()


def _witness(pop, costs, evaluator: _Evaluator, dist: DistMatrix, b: int) -> tuple[int, ...] | None:
    for idx in np.flatnonzero(costs == 0):
        row = pop[idx]
        res = evaluator.cache[row.tobytes()]
        seq = normalize_witness(dist, [int(v) for v in row] + list(res.completion), b)
        if len(seq) <= b and is_valid_burning_sequence(dist, seq):
            return tuple(seq)
        logger.debug("zero-cost prefix %s did not yield a valid sequence", row)
    return None
