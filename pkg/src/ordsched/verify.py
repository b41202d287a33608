"""Competitive-ratio checks for solution pairs.

Ratios are exact Fractions. The per-m inequality registry records the load
combinations whose bounds together imply the guaranteed ratio of each
built-in pair; :func:`proof_inequality_report` evaluates them against the
exact optimum.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

from .core import ZERO, Realization
from .errors import BadParameters, UnsupportedM
from .oracle import DEFAULT_LIMIT, optimal_lower_bound, optimal_makespan
from .patterns import SolutionPair, builtin_pair, evaluate, integer_makespan

ONE = Fraction(1)


def pair_makespan_exact(pair: SolutionPair, r: Realization) -> Fraction:
    ints, d = r.to_integers()
    return Fraction(min(integer_makespan(pair.first, ints), integer_makespan(pair.second, ints)), d)


def competitive_ratio(pair: SolutionPair, r: Realization, lam: Fraction | None = None,
                      limit: int = DEFAULT_LIMIT) -> Fraction:
    """Pair makespan over the optimal makespan; 1 when every job has size zero.

    ``lam`` may be supplied when the optimum is already certified (e.g. by
    :func:`certified_optimum`), which skips the search.
    """
    if lam is None:
        lam = optimal_makespan(r, pair.m, limit).lam
    if lam == 0:
        return ONE
    return pair_makespan_exact(pair, r) / lam


def certified_optimum(r: Realization, m: int, schedule: Sequence[int]) -> Fraction:
    """Return the makespan of ``schedule`` if it meets the analytic lower bound.

    Meeting the bound proves optimality without any search.
    """
    loads = [ZERO] * m
    for p, machine in zip(r.sizes, schedule, strict=True):
        loads[machine - 1] += p
    value = max(loads, default=ZERO)
    if value != optimal_lower_bound(r, m):
        raise BadParameters("schedule does not meet the lower bound; optimality is not certified")
    return value


# Each item: label, {("C" | "L", machine): coefficient}, factor of lambda on the right.
_REGISTRY: dict[int, list[tuple[str, dict[tuple[str, int], int], Fraction]]] = {
    2: [
        ("C1 <= 5/4 lambda", {("C", 1): 1}, Fraction(5, 4)),
        ("L2 <= 5/4 lambda", {("L", 2): 1}, Fraction(5, 4)),
        ("L1 + C2 <= 5/2 lambda", {("L", 1): 1, ("C", 2): 1}, Fraction(5, 2)),
    ],
    3: [
        ("C1 <= 4/3 lambda", {("C", 1): 1}, Fraction(4, 3)),
        ("C2 <= 4/3 lambda", {("C", 2): 1}, Fraction(4, 3)),
        ("L2 <= 4/3 lambda", {("L", 2): 1}, Fraction(4, 3)),
        ("L3 <= 4/3 lambda", {("L", 3): 1}, Fraction(4, 3)),
        ("6 C3 + 6 L1 <= 16 lambda", {("C", 3): 6, ("L", 1): 6}, Fraction(16)),
    ],
    4: [
        ("C1 <= 11/8 lambda", {("C", 1): 1}, Fraction(11, 8)),
        ("C2 <= 11/8 lambda", {("C", 2): 1}, Fraction(11, 8)),
        ("L3 <= 11/8 lambda", {("L", 3): 1}, Fraction(11, 8)),
        ("L4 <= 11/8 lambda", {("L", 4): 1}, Fraction(11, 8)),
        ("2 C3 + L1 <= 4 lambda", {("C", 3): 2, ("L", 1): 1}, Fraction(4)),
        ("2 C4 + L1 <= 4 lambda", {("C", 4): 2, ("L", 1): 1}, Fraction(4)),
        ("2 C3 + L2 <= 4 lambda", {("C", 3): 2, ("L", 2): 1}, Fraction(4)),
        ("C4 + 2 L2 <= 4 lambda", {("C", 4): 1, ("L", 2): 2}, Fraction(4)),
    ],
    5: [
        ("C1 <= 7/5 lambda", {("C", 1): 1}, Fraction(7, 5)),
        ("C2 <= 7/5 lambda", {("C", 2): 1}, Fraction(7, 5)),
        ("C3 <= 7/5 lambda", {("C", 3): 1}, Fraction(7, 5)),
        ("L3 <= 7/5 lambda", {("L", 3): 1}, Fraction(7, 5)),
        ("L4 <= 7/5 lambda", {("L", 4): 1}, Fraction(7, 5)),
        ("L5 <= 7/5 lambda", {("L", 5): 1}, Fraction(7, 5)),
        ("2 C4 + 2 L2 <= 5 lambda", {("C", 4): 2, ("L", 2): 2}, Fraction(5)),
        ("2 C5 + 2 L2 <= 11/2 lambda", {("C", 5): 2, ("L", 2): 2}, Fraction(11, 2)),
        ("10 C4 + 5 L1 <= 21 lambda", {("C", 4): 10, ("L", 1): 5}, Fraction(21)),
        ("10 C5 + 5 L1 <= 21 lambda", {("C", 5): 10, ("L", 1): 5}, Fraction(21)),
    ],
}


class ReportItem(NamedTuple):
    label: str
    lhs: Fraction
    rhs: Fraction
    holds: bool


@dataclass(frozen=True)
class ProofReport:
    m: int
    items: tuple[ReportItem, ...]

    @property
    def all_hold(self) -> bool:
        return all(item.holds for item in self.items)


def proof_inequality_report(m: int, r: Realization, lam: Fraction | None = None,
                            limit: int = DEFAULT_LIMIT) -> ProofReport:
    if m not in _REGISTRY:
        raise UnsupportedM(f"the inequality registry covers m in 2..5, got m={m}")
    pair = builtin_pair(m)
    if lam is None:
        lam = optimal_makespan(r, m, limit).lam
    loads = {"C": evaluate(pair.first, r).loads, "L": evaluate(pair.second, r).loads}
    items = []
    for label, terms, factor in _REGISTRY[m]:
        lhs = sum((coef * loads[sol][i - 1] for (sol, i), coef in terms.items()), ZERO)
        rhs = factor * lam
        items.append(ReportItem(label, lhs, rhs, lhs <= rhs))
    return ProofReport(m, tuple(items))


class SizeModel(NamedTuple):
    """``("integer", k)``: integers in 0..k; ``("grid", d)``: multiples of 1/d in [0, 1]."""

    kind: str
    param: int

    @classmethod
    def parse(cls, text: str) -> "SizeModel":
        kind, _, value = text.partition(":")
        model = cls(kind, int(value))
        model.check()
        return model

    def check(self) -> None:
        if self.kind not in ("integer", "grid") or self.param < 1:
            raise BadParameters(f"unknown size model {self!r}")

    def draw(self, rng: random.Random) -> Fraction:
        if self.kind == "integer":
            return Fraction(rng.randint(0, self.param))
        return Fraction(rng.randint(0, self.param), self.param)


INTEGER_8 = SizeModel("integer", 8)
GRID_12 = SizeModel("grid", 12)
DEFAULT_MODELS = (INTEGER_8, GRID_12)


def random_realization(n_max: int, size_model: SizeModel, seed) -> Realization:
    if n_max < 0:
        raise BadParameters("n_max must be nonnegative")
    size_model.check()
    rng = random.Random(seed)
    n = rng.randint(0, n_max)
    sizes = sorted((size_model.draw(rng) for _ in range(n)), reverse=True)
    return Realization(tuple(sizes))


def _tiny_capacities(m: int, K: int) -> list[int]:
    """Tiny jobs each machine takes in a makespan-1 packing, or raise.

    Halves are paired on the first machines; an odd one out leaves a machine
    with room 1/2, and the remaining machines are empty.
    """
    if m not in (4, 5):
        raise BadParameters(f"tightness instances are defined for m in (4, 5), got {m}")
    if K < m - 1:
        raise BadParameters(f"need K >= {m - 1} so the tiny jobs are at most 1/2, got K={K}")
    tiny = Fraction(m - 1, 2 * K)
    pairs, single = divmod(m + 1, 2)
    rooms = [ZERO] * pairs + [Fraction(1, 2)] * single + [ONE] * (m - pairs - single)
    counts = [room / tiny for room in rooms]
    if any(c.denominator != 1 for c in counts):
        step = 3 if m == 4 else 2
        raise BadParameters(f"K must be a multiple of {step} for m={m}, got K={K}")
    return [int(c) for c in counts]


def tightness_instance(m: int, K: int) -> Realization:
    """``m + 1`` halves followed by ``K`` equal tiny jobs of total ``(m - 1)/2``."""
    _tiny_capacities(m, K)
    half = Fraction(1, 2)
    return Realization((half,) * (m + 1) + (Fraction(m - 1, 2 * K),) * K)


def tightness_schedule(m: int, K: int) -> list[int]:
    """A makespan-1 schedule: halves in pairs, tiny jobs filling the gaps."""
    counts = _tiny_capacities(m, K)
    schedule = [1 + h // 2 for h in range(m + 1)]
    for machine, count in enumerate(counts, start=1):
        schedule += [machine] * count
    return schedule


def tightness_ratio(m: int, K: int, pair: SolutionPair | None = None) -> tuple[Realization, Fraction]:
    r = tightness_instance(m, K)
    lam = certified_optimum(r, m, tightness_schedule(m, K))
    return r, competitive_ratio(pair or builtin_pair(m), r, lam=lam)


def fixed_battery(m: int) -> list[tuple[Realization, Fraction | None]]:
    """Published adversarial inputs for ``m``; λ given where certified by construction."""
    from .lowerbounds import proposition_inputs

    battery: list[tuple[Realization, Fraction | None]] = []
    if m >= 2:
        battery.extend((r, None) for r in proposition_inputs(m)[0])
    if m in (4, 5):
        for K in (m - 1, 2 * (m - 1), 4 * (m - 1), 120):
            r = tightness_instance(m, K)
            battery.append((r, certified_optimum(r, m, tightness_schedule(m, K))))
    return battery


def stress_corpus(trials: int, n_max: int, seed, models: Sequence[SizeModel] = DEFAULT_MODELS
                  ) -> Iterator[Realization]:
    """Trial ``t`` draws from ``models[t % len(models)]`` with its own seed."""
    for t in range(trials):
        yield random_realization(n_max, models[t % len(models)], f"{seed}:{t}")


@dataclass(frozen=True)
class StressResult:
    trials: int
    max_ratio: Fraction
    witness: Realization
    bound: Fraction
    ok: bool
    checked: int


def stress_search(pair: SolutionPair, bound: Fraction, trials: int, n_max: int, seed,
                  models: Sequence[SizeModel] = DEFAULT_MODELS, battery: bool = True,
                  limit: int = DEFAULT_LIMIT) -> StressResult:
    """Largest ratio over the fixed battery and ``trials`` random realizations.

    Ties keep the earliest candidate (battery first, then trial order).
    """
    if n_max > limit:
        raise BadParameters(f"n_max={n_max} exceeds the oracle limit {limit}")
    best, witness, checked = ONE, Realization(()), 0
    candidates = []
    if battery and pair.m >= 2:
        candidates.extend(fixed_battery(pair.m))
    for r, lam in candidates:
        ratio = competitive_ratio(pair, r, lam=lam, limit=max(limit, r.n))
        checked += 1
        if ratio > best:
            best, witness = ratio, r
    for r in stress_corpus(trials, n_max, seed, models):
        ratio = competitive_ratio(pair, r, limit=limit)
        checked += 1
        if ratio > best:
            best, witness = ratio, r
    return StressResult(trials, best, witness, Fraction(bound), best <= bound, checked)

