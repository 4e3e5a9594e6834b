"""Brute-force ground truth for small instances, plus a random-instance
generator for property tests."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import factorial

import numpy as np

from .instance import Instance, _check_overflow_budget, _cost_unchecked, evaluate_cost

DEFAULT_LIMIT = 10


class OracleLimitError(ValueError):
    """Instance too large for exhaustive enumeration."""


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    argmin: np.ndarray  # lexicographically smallest optimal permutation
    explored: int  # always n!


def exhaustive_optimum(inst: Instance, limit: int = DEFAULT_LIMIT) -> OracleResult:
    """Enumerate all n! permutations; deterministic lexicographic tie-break.

    itertools.permutations yields in lexicographic order, so keeping the
    first strict improvement gives the lexicographically smallest argmin.
    """
    if inst.n > limit:
        raise OracleLimitError(
            f"n={inst.n} exceeds the enumeration limit {limit}; refusing"
        )
    flow, dist = inst.flow, inst.dist
    fast = _check_overflow_budget(inst)
    best_cost = None
    best_perm = None
    for perm in permutations(range(inst.n)):
        p = np.array(perm, dtype=np.int64)
        cost = _cost_unchecked(flow, dist, p) if fast else evaluate_cost(inst, p)
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_perm = p
    return OracleResult(optimum=best_cost, argmin=best_perm, explored=factorial(inst.n))


def random_instance(
    n: int,
    max_entry: int,
    symmetric: bool = False,
    zero_diagonal: bool = False,
    rng: np.random.Generator | None = None,
    name: str = "random",
) -> Instance:
    """Uniform integer matrices in [0, max_entry], optionally symmetrized
    (upper triangle mirrored) and zero-diagonal."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if max_entry < 0:
        raise ValueError("max_entry must be >= 0")
    rng = np.random.default_rng() if rng is None else rng

    def matrix():
        m = rng.integers(0, max_entry + 1, size=(n, n), dtype=np.int64)
        if symmetric:
            upper = np.triu(m)
            m = upper + upper.T - np.diag(np.diag(m))
        if zero_diagonal:
            np.fill_diagonal(m, 0)
        return m

    return Instance(name=name, n=n, flow=matrix(), dist=matrix())
