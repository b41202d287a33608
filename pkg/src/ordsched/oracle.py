"""Optimal offline makespan on identical machines.

Sizes are rescaled to integers by their common denominator before any
search, so the inner loops never touch Fractions; results are scaled back
exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .core import ZERO, Realization
from .errors import BadParameters, SearchLimitExceeded

DEFAULT_LIMIT = 24
BRUTE_FORCE_LIMIT = 10


@dataclass(frozen=True)
class OptResult:
    lam: Fraction
    witness: tuple[int, ...]  # machine (1-based) for each job 1..n
    nodes_explored: int

    def loads(self, r: Realization, m: int) -> list[Fraction]:
        out = [ZERO] * m
        for p, machine in zip(r.sizes, self.witness):
            out[machine - 1] += p
        return out


def _check_m(m: int) -> None:
    if m < 1:
        raise BadParameters(f"need at least one machine, got m={m}")


def optimal_lower_bound(r: Realization, m: int) -> Fraction:
    """``max(p_1, W/m, p_m + p_{m+1})``."""
    _check_m(m)
    if r.n == 0:
        return ZERO
    return max(r[1], r.total / m, r[m] + r[m + 1])


def _lpt(sizes: list[int], m: int) -> tuple[int, list[int]]:
    loads = [0] * m
    assignment = []
    for p in sizes:
        i = loads.index(min(loads))
        loads[i] += p
        assignment.append(i)
    return max(loads, default=0), assignment


def lpt_makespan(r: Realization, m: int) -> Fraction:
    """List-schedule the (sorted) jobs onto the least loaded machine, lowest index first."""
    _check_m(m)
    ints, d = r.to_integers()
    value, _ = _lpt(ints, m)
    return Fraction(value, d)


def optimal_makespan(r: Realization, m: int, limit: int = DEFAULT_LIMIT) -> OptResult:
    """Exact optimum by depth-first branch and bound.

    Jobs are placed largest first. Machines with equal current load are
    interchangeable, so only the first of each load value is tried (this
    includes opening at most one empty machine per job). A branch dies when
    the placed load reaches the incumbent, and the search stops outright once
    the incumbent meets the analytic lower bound.
    """
    _check_m(m)
    if r.n > limit:
        raise SearchLimitExceeded(f"n={r.n} exceeds the search limit of {limit} jobs")
    ints, d = r.to_integers()
    positive = [p for p in ints if p > 0]
    k = len(positive)
    if k == 0:
        return OptResult(ZERO, (1,) * r.n, 0)

    best, lpt_assign = _lpt(positive, m)
    best_assign = list(lpt_assign)
    total = sum(positive)
    tail_pair = positive[m - 1] + positive[m] if k > m else 0
    floor = max(positive[0], -(-total // m), tail_pair)

    loads = [0] * m
    current = [0] * k
    nodes = 0

    def search(j: int, cur_max: int) -> bool:
        nonlocal best, best_assign, nodes
        nodes += 1
        if j == k:
            best = cur_max
            best_assign = list(current)
            return best <= floor
        p = positive[j]
        seen = set()
        for i in range(m):
            load = loads[i]
            if load in seen:
                continue
            seen.add(load)
            new = load + p
            if new >= best:
                continue
            loads[i] = new
            current[j] = i
            done = search(j + 1, max(cur_max, new))
            loads[i] = load
            if done:
                return True
        return False

    if best > floor:
        search(0, 0)

    # Zero-size jobs sit wherever; put them on machine 1.
    witness = []
    it = iter(best_assign)
    for p in ints:
        witness.append(next(it) + 1 if p > 0 else 1)
    return OptResult(Fraction(best, d), tuple(witness), nodes)


def brute_force_makespan(r: Realization, m: int) -> Fraction:
    """Reference optimum: every assignment with job 1 pinned to machine 1."""
    _check_m(m)
    if r.n > BRUTE_FORCE_LIMIT:
        raise SearchLimitExceeded(f"brute force is limited to {BRUTE_FORCE_LIMIT} jobs, got {r.n}")
    if r.n == 0:
        return ZERO
    ints, d = r.to_integers()
    if sum(ints) >= 2 ** 62:
        # Too wide for int64 rows; fall back to plain Python integers.
        best = min(
            max(sum(p for p, a in zip(ints, (0,) + rest) if a == i) for i in range(m))
            for rest in product(range(m), repeat=r.n - 1))
        return Fraction(best, d)
    rows = np.array(list(product(range(m), repeat=r.n - 1)), dtype=np.int64)
    rows = rows.reshape(m ** (r.n - 1), r.n - 1)
    loads = np.zeros((rows.shape[0], m), dtype=np.int64)
    loads[:, 0] = ints[0]
    for j, p in enumerate(ints[1:]):
        loads[np.arange(rows.shape[0]), rows[:, j]] += p
    return Fraction(int(loads.max(axis=1).min()), d)
