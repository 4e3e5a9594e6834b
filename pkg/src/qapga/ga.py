"""Genetic algorithm over permutations: two-point order crossover, swap
mutation, roulette-wheel selection with a minimization transform, and a
generational loop with elitism.

Determinism contract
--------------------
A run owns a single numpy Generator seeded from GaConfig.rng_seed.  The
initial population consumes one permutation draw per chromosome.  Each
generation then draws one block of 11 uniforms per offspring pair, consumed
in a fixed order regardless of which coins fire:

    [0] parent-1 roulette draw      [1] parent-2 roulette draw
    [2] crossover coin              [3] cut point a   [4] cut point b
    [5] mutation coin, child 1      [6] swap pos a1   [7] swap pos b1
    [8] mutation coin, child 2      [9] swap pos a2  [10] swap pos b2

Identical (instance, config, seed) therefore replays identically.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .instance import (
    Instance,
    _check_overflow_budget,
    _cost_unchecked,
    _swap_delta_unchecked,
    check_permutation,
    evaluate_cost,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Chromosome:
    """A permutation with its cached cost (always consistent)."""

    perm: np.ndarray
    cost: int

    def __post_init__(self):
        self.perm.setflags(write=False)


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 100
    crossover_rate: float = 0.8
    mutation_rate: float = 0.2
    max_generations: int = 10000
    target_cost: int | None = None
    time_limit_s: float | None = None
    elitism_count: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if not (0.0 <= self.crossover_rate <= 1.0):
            raise ValueError("crossover_rate must be in [0, 1]")
        if not (0.0 <= self.mutation_rate <= 1.0):
            raise ValueError("mutation_rate must be in [0, 1]")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")
        if not (0 <= self.elitism_count < self.population_size):
            raise ValueError("elitism_count must be in [0, population_size)")


_CONFIG_FIELDS = {
    "population_size": int,
    "crossover_rate": float,
    "mutation_rate": float,
    "max_generations": int,
    "target_cost": int,
    "time_limit_s": float,
    "elitism_count": int,
    "rng_seed": int,
}


def config_from_text(text: str) -> GaConfig:
    """Build a GaConfig from flat `key = value` lines.

    Blank lines and `#` comments are ignored; unknown keys are errors; the
    literal value `none` clears an optional field.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = (s.strip() for s in line.partition("="))
        if key not in _CONFIG_FIELDS:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
        if value.lower() == "none":
            values[key] = None
            continue
        try:
            values[key] = _CONFIG_FIELDS[key](value)
        except ValueError:
            raise ValueError(
                f"line {lineno}: bad value {value!r} for {key}"
            ) from None
    return GaConfig(**values)


def config_to_text(cfg: GaConfig) -> str:
    """Inverse of config_from_text."""
    lines = []
    for key in _CONFIG_FIELDS:
        value = getattr(cfg, key)
        lines.append(f"{key} = {'none' if value is None else value}")
    return "\n".join(lines) + "\n"


@dataclass
class GaResult:
    best: Chromosome
    generations_run: int
    evaluations: int
    wall_time_s: float
    history: list[int]

    def to_dict(self, include_timing: bool = True) -> dict:
        """Serializable view; drop timing for determinism comparisons."""
        d = {
            "best_perm": self.best.perm.tolist(),
            "best_cost": self.best.cost,
            "generations_run": self.generations_run,
            "evaluations": self.evaluations,
            "history": list(self.history),
        }
        if include_timing:
            d["wall_time_s"] = self.wall_time_s
        return d


def init_population(inst: Instance, size: int, rng: np.random.Generator) -> list[Chromosome]:
    """Uniformly random permutations with cached costs."""
    if size < 2:
        raise ValueError("population size must be >= 2")
    return [
        Chromosome(p, evaluate_cost(inst, p))
        for p in (rng.permutation(inst.n) for _ in range(size))
    ]


def order_crossover_two_point(
    p1: np.ndarray, p2: np.ndarray, cut1: int, cut2: int
) -> tuple[np.ndarray, np.ndarray]:
    """Two-point order-preserving crossover.

    Child 1 keeps p1[cut1:cut2] in place; the other positions are filled
    left-to-right with the genes missing from that segment, in the order
    they occur in p2.  Child 2 is the mirror image.
    """
    n = len(p1)
    if len(p2) != n:
        raise ValueError("parents have different lengths")
    if not (0 <= cut1 <= cut2 <= n):
        raise ValueError(f"cut points out of range: ({cut1}, {cut2}) for n={n}")
    p1 = np.asarray(p1)
    p2 = np.asarray(p2)

    def make_child(keeper, donor):
        child = np.empty(n, dtype=np.int64)
        child[cut1:cut2] = keeper[cut1:cut2]
        in_segment = np.zeros(n, dtype=bool)
        in_segment[keeper[cut1:cut2]] = True
        fill = donor[~in_segment[donor]]
        child[:cut1] = fill[:cut1]
        child[cut2:] = fill[cut1:]
        return child

    return make_child(p1, p2), make_child(p2, p1)


def _swap_positions(n: int, u_a: float, u_b: float) -> tuple[int, int]:
    """Two distinct uniform positions from two uniforms in [0, 1)."""
    a = int(u_a * n)
    b = int(u_b * (n - 1))
    if b >= a:
        b += 1
    return a, b


def swap_mutation(p: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Exchange two distinct, uniformly chosen positions of p."""
    n = len(p)
    if n < 2:
        log.warning("swap mutation on length-%d permutation is a no-op", n)
        return np.asarray(p).copy()
    a, b = _swap_positions(n, rng.random(), rng.random())
    q = np.asarray(p).copy()
    q[a], q[b] = q[b], q[a]
    return q


def selection_weights(costs) -> np.ndarray:
    """Roulette weights for minimization: lower cost, strictly higher weight.

    Raw weight is (max + min - cost); when the cheapest cost is 0 the worst
    raw weight degenerates to 0, so 1 is added across the board to keep every
    weight positive.  Equal costs fall back to uniform weights.
    """
    costs = np.asarray(costs, dtype=np.int64)
    if costs.size == 0:
        raise ValueError("empty cost list")
    if (costs < 0).any():
        raise ValueError("costs must be non-negative")
    lo = int(costs.min())
    hi = int(costs.max())
    if lo == hi:
        return np.full(costs.size, 1.0 / costs.size)
    raw = (hi + lo) - costs
    if lo == 0:
        raw = raw + 1
    return raw / raw.sum()


def _pick(cumweights: np.ndarray, u: float) -> int:
    return min(int(np.searchsorted(cumweights, u, side="right")), len(cumweights) - 1)


def roulette_select(
    population: list[Chromosome], weights: np.ndarray, rng: np.random.Generator
) -> Chromosome:
    """Sample one chromosome with probability proportional to its weight."""
    if len(population) != len(weights):
        raise ValueError("population and weights have different lengths")
    cum = np.cumsum(weights)
    return population[_pick(cum, rng.random())]


def _assert_bijections(perms: np.ndarray) -> bool:
    return bool((np.sort(perms, axis=1) == np.arange(perms.shape[1])).all())


def evolve_step(
    inst: Instance,
    population: list[Chromosome],
    cfg: GaConfig,
    rng: np.random.Generator,
    _counter: list | None = None,
) -> list[Chromosome]:
    """One generation: elitist survivors plus roulette/crossover/mutation offspring.

    New chromosomes coming out of crossover are cost-evaluated in one batch;
    a mutated verbatim copy reuses its parent's cost through an O(n) swap
    delta instead.  If _counter is given, its first element is incremented
    by the number of cost evaluations performed (full or delta).
    """
    pop_size = cfg.population_size
    if len(population) != pop_size:
        raise ValueError("population size does not match config")
    n = inst.n
    flow, dist = inst.flow, inst.dist
    fast = _check_overflow_budget(inst)
    evals = 0

    costs = np.fromiter((c.cost for c in population), dtype=np.int64, count=pop_size)
    elite_idx = np.argsort(costs, kind="stable")[: cfg.elitism_count]
    next_gen: list[Chromosome] = [population[i] for i in elite_idx]

    cum = np.cumsum(selection_weights(costs))
    n_offspring = pop_size - cfg.elitism_count
    n_pairs = (n_offspring + 1) // 2
    blocks = rng.random((n_pairs, 11))

    parent_idx = np.minimum(
        np.searchsorted(cum, blocks[:, :2].ravel(), side="right"), pop_size - 1
    ).reshape(n_pairs, 2)
    do_cx = blocks[:, 2] < cfg.crossover_rate

    child_perms: list[np.ndarray] = []
    child_costs: list[int | None] = []  # None until the batch evaluation below
    from_crossover: list[int] = []
    for pair in range(n_pairs):
        pa = population[parent_idx[pair, 0]]
        pb = population[parent_idx[pair, 1]]
        if do_cx[pair]:
            blk = blocks[pair]
            cut1, cut2 = sorted((int(blk[3] * (n + 1)), int(blk[4] * (n + 1))))
            for child in order_crossover_two_point(pa.perm, pb.perm, cut1, cut2):
                from_crossover.append(len(child_perms))
                child_perms.append(child)
                child_costs.append(None)
        else:
            for parent in (pa, pb):
                child_perms.append(parent.perm.copy())
                child_costs.append(parent.cost)

    # mutations first, so crossover children need a single batched evaluation
    if n >= 2 and cfg.mutation_rate > 0:
        for pair in range(n_pairs):
            blk = blocks[pair]
            for slot, coin_i in ((0, 5), (1, 8)):
                if blk[coin_i] >= cfg.mutation_rate:
                    continue
                idx = 2 * pair + slot
                perm = child_perms[idx]
                a, b = _swap_positions(n, blk[coin_i + 1], blk[coin_i + 2])
                if child_costs[idx] is not None:
                    if fast:
                        child_costs[idx] += _swap_delta_unchecked(flow, dist, perm, a, b)
                        evals += 1
                    else:
                        child_costs[idx] = None  # big-int path: full re-evaluation
                perm[a], perm[b] = perm[b], perm[a]

    to_eval = [i for i, c in enumerate(child_costs) if c is None]
    if to_eval:
        stacked = np.stack([child_perms[i] for i in to_eval])
        if fast:
            batch = np.einsum(
                "ij,pij->p", flow, dist[stacked[:, :, None], stacked[:, None, :]]
            )
            for i, c in zip(to_eval, batch):
                child_costs[i] = int(c)
        else:
            for i in to_eval:
                child_costs[i] = evaluate_cost(inst, child_perms[i])
        evals += len(to_eval)

    child_perms = child_perms[:n_offspring]
    child_costs = child_costs[:n_offspring]
    assert _assert_bijections(np.stack(child_perms)) if child_perms else True
    if _counter is not None:
        _counter[0] += evals
    next_gen.extend(
        Chromosome(p, int(c)) for p, c in zip(child_perms, child_costs)
    )
    return next_gen


def run(inst: Instance, cfg: GaConfig) -> GaResult:
    """Full GA run: evolve until max_generations, target_cost, or time limit."""
    rng = np.random.default_rng(cfg.rng_seed)
    start = time.perf_counter()
    counter = [0]
    population = init_population(inst, cfg.population_size, rng)
    counter[0] += cfg.population_size

    best = min(population, key=lambda c: c.cost)
    history = [best.cost]
    generations = 0

    def done():
        if cfg.target_cost is not None and best.cost <= cfg.target_cost:
            return True
        if cfg.time_limit_s is not None and time.perf_counter() - start >= cfg.time_limit_s:
            return True
        return False

    while generations < cfg.max_generations and not done():
        population = evolve_step(inst, population, cfg, rng, counter)
        generations += 1
        gen_best = min(population, key=lambda c: c.cost)
        if gen_best.cost < best.cost:
            best = gen_best
        history.append(best.cost)

    return GaResult(
        best=best,
        generations_run=generations,
        evaluations=counter[0],
        wall_time_s=time.perf_counter() - start,
        history=history,
    )
