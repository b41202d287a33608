"""Computational lower bounds.

* the two-solution game: the best any pair of ordinal solutions can do on
  a fixed family of adversarial inputs, found by exhausting all pairs of
  set partitions of the relevant job prefix;
* the adversary that defeats any finite set of two-machine solutions;
* the closed-form bound for single-solution algorithms and its table.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, lcm
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .core import Realization, RunLengthRealization, realization, validate_realization
from .errors import (BadM, BadParameters, DivisibilityViolation, InsufficientDefinition,
                     LimitExceeded, NotTwoMachines)
from .oracle import optimal_makespan
from .patterns import AssignmentRule, evaluate, machine_of, solution_type

PARTITION_LIMIT = 12
# Above this many candidate partitions the game search needs explicit consent.
LONG_SEARCH_PARTITIONS = 5000


# Set partitions

class PrefixPartition(NamedTuple):
    """A set partition of jobs 1..k as a restricted-growth string (labels from 0)."""

    labels: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.labels)

    @property
    def block_count(self) -> int:
        return max(self.labels) + 1 if self.labels else 0

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.block_count)]
        for j, b in enumerate(self.labels, start=1):
            out[b].append(j)
        return out


def _rgs(k: int, max_blocks: int) -> Iterator[tuple[int, ...]]:
    labels = [0] * k

    def rec(j: int, top: int):
        if j == k:
            yield tuple(labels)
            return
        for b in range(min(top + 2, max_blocks)):
            labels[j] = b
            yield from rec(j + 1, max(top, b))

    yield from rec(1, 0)


def enumerate_partitions(k: int, max_blocks: int) -> Iterator[PrefixPartition]:
    """Every partition of {1..k} into at most ``max_blocks`` blocks, once each,
    in lexicographic order of restricted-growth strings."""
    if k < 1 or max_blocks < 1:
        raise BadParameters("k and max_blocks must be positive")
    if k > PARTITION_LIMIT:
        raise LimitExceeded(f"k={k} exceeds the enumeration limit of {PARTITION_LIMIT}")
    return (PrefixPartition(labels) for labels in _rgs(k, max_blocks))


def stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind by the usual recurrence."""
    row = [1] + [0] * k
    for i in range(1, n + 1):
        new = [0] * (k + 1)
        for j in range(1, min(i, k) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]


def partition_count(k: int, max_blocks: int) -> int:
    return sum(stirling2(k, b) for b in range(1, max_blocks + 1))


def canonical_partition(machines: Sequence[int]) -> PrefixPartition:
    """Relabel machine indices by first appearance."""
    seen: dict[int, int] = {}
    return PrefixPartition(tuple(seen.setdefault(x, len(seen)) for x in machines))


def prefix_partition(rule: AssignmentRule, k: int) -> PrefixPartition:
    return canonical_partition([machine_of(rule, j) for j in range(1, k + 1)])


# Adversarial inputs

def proposition_inputs(m: int) -> tuple[list[Realization], int]:
    """The adversarial input family for ``m`` machines and its prefix length."""
    if m == 2:
        seqs = [(4, 1, 1, 1, 1), (3, 2, 2, 1, 0), (2, 2, 2, 1, 1), (2, 1, 1, 1, 1)]
        return [realization(*s) for s in seqs], 5
    if m == 3:
        seqs = [
            (3, 3, 1, 1, 1, 0, 0),
            (2, 1, 1, 1, 1, 0, 0),
            (2, 2, 2, 1, 1, 1, 0),
            (3, 1, 1, 1, 1, 1, 1),
            (6, 6, 1, 1, 1, 1, 1, 1),
            (3, 3, 3, 3, 3, 1, 1, 1),
        ]
        return [realization(*s) for s in seqs], 8
    if m >= 4:
        seqs = [
            (1,) * (2 * m),
            (3, 3) + (2,) * (m - 4) + (1,) * (m + 2),
            (3,) + (2,) * (m - 2) + (1,) * (m + 1),
        ]
        return [realization(*s) for s in seqs], 2 * m
    raise BadM(f"adversarial inputs exist for m >= 2, got m={m}")


@dataclass(frozen=True)
class GameResult:
    m: int
    k: int
    inputs: tuple[Realization, ...]
    optima: tuple[Fraction, ...]
    value: Fraction
    witness: tuple[PrefixPartition, PrefixPartition]
    worst_input_index: int  # input attaining the witness pair's maximum
    pairs_checked: int
    partitions: int


def _prefix_ints(inputs: Sequence[Realization], k: int) -> np.ndarray:
    rows = []
    for t, r in enumerate(inputs):
        if any(p > 0 for p in r.sizes[k:]):
            raise BadParameters(f"input {t} has positive jobs beyond the first {k}")
        ints, _ = Realization(r.sizes[:k]).to_integers()
        rows.append(ints + [0] * (k - len(ints)))
    return np.array(rows, dtype=object)


def _partition_makespans(labels: np.ndarray, sizes: np.ndarray, m: int) -> np.ndarray:
    """Integer makespan of every partition (rows) on every input (columns)."""
    P, k = labels.shape
    out = np.empty((P, sizes.shape[0]), dtype=object)
    for t, row in enumerate(sizes):
        loads = np.zeros((P, m), dtype=object)
        for j in range(k):
            loads[np.arange(P), labels[:, j]] += row[j]
        out[:, t] = loads.max(axis=1)
    return out


def game_ratio(s1: PrefixPartition, s2: PrefixPartition, inputs: Sequence[Realization],
               optima: Sequence[Fraction]) -> tuple[Fraction, int]:
    """Max over inputs of the pair's ratio, and the first input attaining it."""
    best, where = Fraction(-1), -1
    for t, (r, lam) in enumerate(zip(inputs, optima)):
        spans = []
        for part in (s1, s2):
            loads = [Fraction(0)] * part.block_count
            for j, b in enumerate(part.labels, start=1):
                loads[b] += r[j]
            spans.append(max(loads))
        ratio = min(spans) / lam if lam else Fraction(1)
        if ratio > best:
            best, where = ratio, t
    return best, where


def two_solution_game_value(m: int, inputs: Sequence[Realization], k: int,
                            allow_long: bool = False, chunk: int = 128) -> GameResult:
    """Least worst-case ratio any two solutions can guarantee on ``inputs``.

    Only the first ``k`` jobs carry weight, so a solution is a set partition
    of {1..k} into at most ``m`` unlabeled blocks, and the pair objective is
    symmetric. Ratios are replaced by their rank among all distinct ratio
    values, which preserves every min/max comparison and keeps the pairwise
    sweep in small integers. Ties go to the first pair in enumeration order.
    """
    if m < 1:
        raise BadM(f"need m >= 1, got {m}")
    if not inputs:
        raise BadParameters("the game needs at least one input")
    if k > PARTITION_LIMIT:
        raise LimitExceeded(f"k={k} exceeds the enumeration limit of {PARTITION_LIMIT}")
    count = partition_count(k, m)
    if count > LONG_SEARCH_PARTITIONS and not allow_long:
        raise LimitExceeded(
            f"{count} partitions means ~{count * count // 2} pairs; pass allow_long to proceed")

    inputs = tuple(inputs)
    optima = tuple(optimal_makespan(r, m, limit=max(24, r.n)).lam for r in inputs)
    sizes = _prefix_ints(inputs, k)
    parts = list(enumerate_partitions(k, m))
    labels = np.array([p.labels for p in parts], dtype=np.int64)
    spans = _partition_makespans(labels, sizes, m)

    # Exact ratios, then dense ranks.
    scales = [Realization(r.sizes[:k]).common_denominator() for r in inputs]
    ratio_of = {}
    for t in range(len(inputs)):
        for s in set(spans[:, t]):
            if optima[t] == 0:
                ratio_of[(t, s)] = Fraction(1)
            else:
                ratio_of[(t, s)] = Fraction(int(s), scales[t]) / optima[t]
    distinct = sorted(set(ratio_of.values()))
    rank = {v: i for i, v in enumerate(distinct)}
    dtype = np.int16 if len(distinct) < 2 ** 15 else np.int64
    R = np.empty(spans.shape, dtype=dtype)
    for t in range(len(inputs)):
        R[:, t] = [rank[ratio_of[(t, s)]] for s in spans[:, t]]

    P = len(parts)
    best_rank, best_pair = None, None
    for lo in range(0, P, chunk):
        hi = min(lo + chunk, P)
        # value[a, b] = max_t min(R[lo + a, t], R[b, t])
        block = np.minimum(R[lo:hi, None, :], R[None, :, :]).max(axis=2)
        # unordered pairs: only b >= a
        cols = np.arange(P)[None, :]
        rows = np.arange(lo, hi)[:, None]
        block = np.where(cols >= rows, block, np.iinfo(block.dtype).max)
        flat = int(block.argmin())
        value = int(block.flat[flat])
        if best_rank is None or value < best_rank:
            a, b = divmod(flat, P)
            best_rank, best_pair = value, (lo + a, b)
    s1, s2 = parts[best_pair[0]], parts[best_pair[1]]
    value, worst = game_ratio(s1, s2, inputs, optima)
    assert value == distinct[best_rank]
    return GameResult(m, k, inputs, optima, value, (s1, s2), worst, P * (P + 1) // 2, P)


# Adversary against finitely many two-machine solutions

@dataclass(frozen=True)
class AdversaryResult:
    i: int
    instance: Realization
    lam: Fraction
    ratio_lb: Fraction
    types: tuple[int | None, ...]  # None when the type exceeds M + 3 or is undefined
    makespans: tuple[Fraction, ...]

    @property
    def verified(self) -> bool:
        target = self.i * (self.i - 1) + 1
        return all(span >= target for span in self.makespans)


def adversary_for_solutions(solutions: Sequence[AssignmentRule], M: int | None = None) -> AdversaryResult:
    """A realization on which none of the ``M`` given solutions is optimal.

    Some type ``i`` in 3..M+3 is missing among the solutions; ``i - 1`` jobs of
    size ``i`` followed by ``i`` jobs of size ``i - 1`` then defeat all of them.
    """
    if M is None:
        M = len(solutions)
    if M < 1 or len(solutions) != M:
        raise InsufficientDefinition(f"expected M={M} >= 1 solutions, got {len(solutions)}")
    types = []
    for rule in solutions:
        if rule.m != 2:
            raise NotTwoMachines(f"the adversary handles two machines, got m={rule.m}")
        try:
            t = solution_type(rule)
        except ValueError:
            t = None
        types.append(t if t is not None and t <= M + 3 else None)
    i = next(c for c in range(3, M + 4) if c not in types)
    instance = validate_realization((i,) * (i - 1) + (i - 1,) * i)
    lam = Fraction(i * (i - 1))
    spans = tuple(evaluate(rule, instance).makespan for rule in solutions)
    return AdversaryResult(i, instance, lam, (lam + 1) / lam, tuple(types), spans)


# Single-solution bound

PREVIOUS_BOUNDS = {
    5: Fraction("1.3704"), 6: Fraction("1.4539"), 7: Fraction("1.4542"), 8: Fraction("1.4485"),
    9: Fraction("1.4775"), 10: Fraction("1.4776"), 11: Fraction("1.4744"), 12: Fraction("1.4891"),
    13: Fraction("1.4892"), 14: Fraction("1.4872"), 15: Fraction("1.4961"), 16: Fraction("1.4961"),
    17: Fraction("1.4947"),
}

CAP = Fraction(3, 2)


@dataclass(frozen=True)
class LPResult:
    m: int
    A: Fraction
    B: Fraction
    R: Fraction
    choices: tuple[str, ...]  # per machine: "class1", "class2" or "class3"
    truncated: bool

    @property
    def reported(self) -> Fraction:
        return CAP if self.truncated else self.R

    def rho(self) -> tuple[Fraction, ...]:
        """Per-machine binding value of the selected constraint at ``R``."""
        out = []
        for i, tag in enumerate(self.choices, start=1):
            if tag == "class1":
                out.append((self.R - 1) / (self.m - i))
            elif tag == "class2":
                out.append(2 * (self.R - 1) / (i - 1))
            else:
                out.append(self.R / self.m)
        return tuple(out)


def _check_lp_m(m: int) -> None:
    if not 5 <= m <= 17:
        raise BadM(f"the single-solution bound is tabulated for 5 <= m <= 17, got m={m}")


def constraint_choices(m: int) -> tuple[str, ...]:
    low, high = floor(Fraction(2 * m, 3)), ceil(Fraction(2 * m, 3)) + 1
    t = m // 3
    middle = {0: None, 1: 2 * t + 1, 2: 2 * t + 2}[m % 3]
    choices = []
    for i in range(1, m + 1):
        if i <= low:
            choices.append("class1")
        elif i >= high:
            choices.append("class2")
        elif i == middle:
            choices.append("class3")
        else:
            raise AssertionError(f"machine {i} has no constraint for m={m}")
    return tuple(choices)


def single_solution_lp_bound(m: int) -> LPResult:
    """Sum one constraint per machine: ``1 <= (R - 1) * A + R * B``, so
    ``R >= (1 + A) / (A + B)``."""
    _check_lp_m(m)
    choices = constraint_choices(m)
    A = Fraction(0)
    B = Fraction(0)
    for i, tag in enumerate(choices, start=1):
        if tag == "class1":
            A += Fraction(1, m - i)
        elif tag == "class2":
            A += Fraction(2, i - 1)
        else:
            B += Fraction(1, m)
    R = (1 + A) / (A + B)
    return LPResult(m, A, B, R, choices, R > CAP)


def table1(m_from: int = 5, m_to: int = 17) -> list[LPResult]:
    _check_lp_m(m_from)
    _check_lp_m(m_to)
    if m_from > m_to:
        raise BadM(f"empty range {m_from}..{m_to}")
    return [single_solution_lp_bound(m) for m in range(m_from, m_to + 1)]


# Input classes and their optimal schedules

def _check_class(cls: int, m: int, i: int, n: int) -> None:
    _check_lp_m(m)
    if cls == 1 and not 1 <= i <= m - 1:
        raise BadParameters(f"class 1 needs 1 <= i <= m - 1, got i={i}")
    if cls == 2 and not 2 <= i <= m:
        raise BadParameters(f"class 2 needs 2 <= i <= m, got i={i}")
    if cls not in (1, 2, 3):
        raise BadParameters(f"input class must be 1, 2 or 3, got {cls}")
    if n < 2 * m:
        raise BadParameters(f"need n >= 2m = {2 * m}, got n={n}")
    top = m if cls == 3 else max(m - 1, i - 1, m)
    if n % lcm(*range(1, top + 1)):
        raise DivisibilityViolation(f"n={n} is not divisible by lcm(1..{top})")


def lb_input_class(cls: int, m: int, i: int, n: int) -> RunLengthRealization:
    _check_class(cls, m, i, n)
    if cls == 1:
        blocks = ((i, Fraction(1)), (n - i, Fraction(m - i, n)))
    elif cls == 2:
        big = 2 * m - i + 1
        blocks = ((big, Fraction(1, 2)), (n - big, Fraction(i - 1, 2 * n)))
    else:
        blocks = ((n, Fraction(m, n)),)
    return RunLengthRealization(tuple((c, s) for c, s in blocks if c > 0))


class ConstructiveCheck(NamedTuple):
    cost: Fraction
    ok: bool
    groups: tuple[tuple[int, int, int], ...]  # (machines, large jobs each, small-job capacity each)


def constructive_schedule_check(cls: int, m: int, i: int, n: int) -> ConstructiveCheck:
    """Build the cost-1 schedule for an input class by counting, never listing jobs.

    Each group of machines takes a fixed number of large jobs and at most
    ``capacity`` small ones. The check confirms that the large jobs are all
    placed exactly, that the groups have room for every small job, that a
    full machine stays at load <= 1, and reports the makespan of an even
    spread of the small jobs.
    """
    r = lb_input_class(cls, m, i, n)
    if cls == 1:
        large, large_count, small_machines = Fraction(1), i, m - i
        groups = ((i, 1, 0), (m - i, 0, n // (m - i)))
    elif cls == 2:
        large, large_count, small_machines = Fraction(1, 2), 2 * m - i + 1, i - 1
        groups = ((m - i + 1, 2, 0), (i - 1, 1, n // (i - 1)))
    else:
        large, large_count, small_machines = None, 0, m
        groups = ((m, 0, n // m),)
    small_count = r.n - large_count
    small = r.blocks[-1][1] if small_count else Fraction(0)

    placed_large = sum(machines * each for machines, each, _ in groups)
    room = sum(machines * cap for machines, _, cap in groups)
    full_loads = [each * (large or 0) + cap * small for _, each, cap in groups]
    q, rem = divmod(small_count, small_machines)
    spread = q + (rem > 0)
    cost = max(each * (large or 0) + (spread if cap else 0) * small for _, each, cap in groups)
    ok = (placed_large == large_count and room >= small_count
          and max(full_loads) <= 1 and cost <= 1 and r.n <= n)
    return ConstructiveCheck(cost, ok, groups)
