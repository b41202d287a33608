"""Ordinal solutions encoded as a finite prefix plus a periodic residue rule.

A rule sends job ``j`` to ``prefix[j-1]`` while ``j <= len(prefix)`` and to
``residues[j % period]`` afterwards. Machines are numbered from 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Iterator, Mapping, NamedTuple

from .core import ZERO, Realization
from .errors import BadMachineIndex, IncompleteResidueMap, NotTwoMachines, UnsupportedM


@dataclass(frozen=True)
class AssignmentRule:
    m: int
    prefix: tuple[int, ...]
    period: int
    residues: tuple[int, ...]  # residues[r] is the machine for j % period == r

    @classmethod
    def build(cls, m: int, prefix, period: int, residues: Mapping[int, int]) -> "AssignmentRule":
        """Build from a residue mapping and validate it."""
        missing = [r for r in range(period) if r not in residues]
        if missing:
            raise IncompleteResidueMap(f"residue map has no machine for residue(s) {missing}")
        extra = [r for r in residues if not 0 <= r < period]
        if extra:
            raise IncompleteResidueMap(f"residue(s) {extra} outside 0..{period - 1}")
        rule = cls(m, tuple(prefix), period, tuple(residues[r] for r in range(period)))
        validate_rule(rule)
        return rule

    def machine_of(self, j: int) -> int:
        return machine_of(self, j)

    def members(self, machine: int, count: int) -> list[int]:
        """The first ``count`` job indices assigned to ``machine`` (fewer if finite)."""
        return list(islice(iter_jobs(self, machine), count))


@dataclass(frozen=True)
class SolutionPair:
    m: int
    first: AssignmentRule
    second: AssignmentRule

    def __post_init__(self):
        if self.first.m != self.m or self.second.m != self.m:
            raise BadMachineIndex("both rules of a pair must use the same machine count")


class Evaluation(NamedTuple):
    loads: tuple[Fraction, ...]
    makespan: Fraction


class PairEvaluation(NamedTuple):
    first: Evaluation
    second: Evaluation
    pair_makespan: Fraction


@dataclass(frozen=True)
class RuleCheck:
    unused_machines: tuple[int, ...] = field(default=())

    @property
    def all_used(self) -> bool:
        return not self.unused_machines


def machine_of(rule: AssignmentRule, j: int) -> int:
    if j < 1:
        raise IndexError("job indices start at 1")
    if j <= len(rule.prefix):
        return rule.prefix[j - 1]
    return rule.residues[j % rule.period]


def validate_rule(rule: AssignmentRule) -> RuleCheck:
    """Check machine indices and residue coverage; report unused machines."""
    if rule.m < 1:
        raise BadMachineIndex(f"machine count must be >= 1, got {rule.m}")
    if rule.period < 1:
        raise IncompleteResidueMap(f"period must be >= 1, got {rule.period}")
    if len(rule.residues) != rule.period:
        raise IncompleteResidueMap(
            f"residue map covers {len(rule.residues)} residues, period is {rule.period}")
    for where, seq in (("prefix", rule.prefix), ("residue map", rule.residues)):
        for machine in seq:
            if not isinstance(machine, int) or not 1 <= machine <= rule.m:
                raise BadMachineIndex(f"{where} entry {machine!r} outside 1..{rule.m}")
    # Every machine that ever receives a job shows up in one period past the prefix.
    horizon = len(rule.prefix) + rule.period
    used = {machine_of(rule, j) for j in range(1, horizon + 1)}
    return RuleCheck(tuple(i for i in range(1, rule.m + 1) if i not in used))


def solution_type(rule: AssignmentRule) -> int:
    """Smallest ``k >= 2`` whose job is not on job 1's machine."""
    if rule.m != 2:
        raise NotTwoMachines(f"solution type is defined for two machines, got m={rule.m}")
    home = machine_of(rule, 1)
    # Past the prefix the rule repeats, so one full period settles the question.
    for k in range(2, len(rule.prefix) + rule.period + 2):
        if machine_of(rule, k) != home:
            return k
    raise BadMachineIndex("every job shares job 1's machine; the type is undefined")


def evaluate(rule: AssignmentRule, r: Realization) -> Evaluation:
    loads = [ZERO] * rule.m
    for j, p in enumerate(r.sizes, start=1):
        loads[machine_of(rule, j) - 1] += p
    return Evaluation(tuple(loads), max(loads))


def pair_evaluate(pair: SolutionPair, r: Realization) -> PairEvaluation:
    e1 = evaluate(pair.first, r)
    e2 = evaluate(pair.second, r)
    return PairEvaluation(e1, e2, min(e1.makespan, e2.makespan))


def integer_makespan(rule: AssignmentRule, sizes: list[int]) -> int:
    """Makespan for integer sizes; the fast path used by searches."""
    loads = [0] * rule.m
    for j, p in enumerate(sizes, start=1):
        loads[machine_of(rule, j) - 1] += p
    return max(loads)


_BUILTIN_SPECS = {
    2: (
        ((), 4, {1: 1, 2: 2, 3: 2, 0: 2}),
        ((1, 2, 2), 2, {0: 1, 1: 2}),
    ),
    3: (
        ((), 6, {1: 1, 2: 2, 5: 2, 3: 3, 4: 3, 0: 3}),
        ((1, 2, 3), 3, {0: 1, 2: 2, 1: 3}),
    ),
    4: (
        ((), 8, {1: 1, 2: 2, 3: 3, 6: 3, 0: 3, 4: 4, 5: 4, 7: 4}),
        ((1, 2, 3, 4), 4, {0: 1, 3: 2, 2: 3, 1: 4}),
    ),
    5: (
        ((), 10, {1: 1, 2: 2, 3: 3, 8: 3, 4: 4, 7: 4, 0: 4, 5: 5, 6: 5, 9: 5}),
        ((1, 2, 3, 4, 5), 5, {0: 1, 4: 2, 3: 3, 2: 4, 1: 5}),
    ),
}

# Guaranteed worst-case ratio of each built-in pair.
BUILTIN_BOUNDS = {2: Fraction(5, 4), 3: Fraction(4, 3), 4: Fraction(11, 8), 5: Fraction(7, 5)}


def builtin_pair(m: int) -> SolutionPair:
    if m not in _BUILTIN_SPECS:
        raise UnsupportedM(f"built-in pairs exist for m in 2..5, got m={m}")
    rules = [AssignmentRule.build(m, prefix, period, residues)
             for prefix, period, residues in _BUILTIN_SPECS[m]]
    return SolutionPair(m, rules[0], rules[1])


def iter_jobs(rule: AssignmentRule, machine: int) -> Iterator[int]:
    """Job indices on ``machine`` in increasing order; finite if the machine
    appears only in the prefix."""
    for j in range(1, len(rule.prefix) + 1):
        if rule.prefix[j - 1] == machine:
            yield j
    if machine not in rule.residues:
        return
    j = len(rule.prefix) + 1
    while True:
        if rule.residues[j % rule.period] == machine:
            yield j
        j += 1


# JSON file formats

def rule_to_json(rule: AssignmentRule) -> dict:
    return {
        "m": rule.m,
        "prefix": list(rule.prefix),
        "period": rule.period,
        "residues": {str(r): machine for r, machine in enumerate(rule.residues)},
    }


def rule_from_json(obj) -> AssignmentRule:
    try:
        m = int(obj["m"])
        prefix = [int(x) for x in obj.get("prefix", [])]
        period = int(obj["period"])
        residues = {int(k): int(v) for k, v in obj["residues"].items()}
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise IncompleteResidueMap(
            'a rule needs "m", "period", "residues" and optionally "prefix"') from exc
    return AssignmentRule.build(m, prefix, period, residues)


def pair_to_json(pair: SolutionPair) -> dict:
    return {"m": pair.m, "first": rule_to_json(pair.first), "second": rule_to_json(pair.second)}


def pair_from_json(obj) -> SolutionPair:
    try:
        m = int(obj["m"])
        first, second = obj["first"], obj["second"]
    except (KeyError, TypeError, ValueError) as exc:
        raise IncompleteResidueMap('a pair needs "m", "first" and "second"') from exc
    return SolutionPair(m, rule_from_json(first), rule_from_json(second))
