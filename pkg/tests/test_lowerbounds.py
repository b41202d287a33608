import random
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import comb, factorial, lcm

import pytest
from hypothesis import given, settings, strategies as st

from ordsched.core import Realization, realization
from ordsched.errors import (
    BadM,
    BadParameters,
    DivisibilityViolation,
    InsufficientDefinition,
    LimitExceeded,
    NotTwoMachines,
)
from ordsched.lowerbounds import (
    PREVIOUS_BOUNDS,
    adversary_for_solutions,
    canonical_partition,
    constraint_choices,
    constructive_schedule_check,
    enumerate_partitions,
    game_ratio,
    lb_input_class,
    partition_count,
    prefix_partition,
    proposition_inputs,
    single_solution_lp_bound,
    table1,
    two_solution_game_value,
)
from ordsched.oracle import brute_force_makespan, optimal_makespan
from ordsched.patterns import AssignmentRule, builtin_pair, evaluate, solution_type


def stirling_explicit(n, k):
    """Inclusion-exclusion formula, independent of the recurrence."""
    return sum((-1) ** j * comb(k, j) * (k - j) ** n for j in range(k + 1)) // factorial(k)


def partitions_by_brute_force(k, b):
    return {canonical_partition(f) for f in product(range(b), repeat=k)}


# Set partitions

@pytest.mark.parametrize("k, b, expected", [(5, 2, 16), (8, 3, 1094), (1, 1, 1), (8, 4, 2795)])
def test_partition_counts(k, b, expected):
    parts = list(enumerate_partitions(k, b))
    assert len(parts) == expected == partition_count(k, b)
    assert len(set(parts)) == expected


@pytest.mark.parametrize("k, b", [(k, b) for k in range(1, 8) for b in range(1, 5)])
def test_partitions_match_brute_force(k, b):
    assert set(enumerate_partitions(k, b)) == partitions_by_brute_force(k, b)


@pytest.mark.parametrize("k", range(1, 11))
def test_partition_counts_match_stirling(k):
    for b in range(1, 6):
        expected = sum(stirling_explicit(k, j) for j in range(1, b + 1))
        assert partition_count(k, b) == expected
        if k <= 9:
            assert sum(1 for _ in enumerate_partitions(k, b)) == expected


def test_partitions_are_restricted_growth_and_ordered():
    parts = [p.labels for p in enumerate_partitions(6, 3)]
    assert parts == sorted(parts)
    for labels in parts:
        assert labels[0] == 0
        for j in range(1, len(labels)):
            assert labels[j] <= 1 + max(labels[:j])


def test_partition_guards():
    with pytest.raises(LimitExceeded):
        enumerate_partitions(13, 2)
    with pytest.raises(BadParameters):
        enumerate_partitions(0, 2)


def test_prefix_partition_of_builtin():
    first, second = builtin_pair(2).first, builtin_pair(2).second
    assert prefix_partition(first, 5).blocks() == [[1, 5], [2, 3, 4]]
    assert prefix_partition(second, 5).blocks() == [[1, 4], [2, 3, 5]]


# Adversarial inputs

def test_proposition_inputs_m2():
    inputs, k = proposition_inputs(2)
    assert k == 5 and len(inputs) == 4
    assert inputs[0] == realization(4, 1, 1, 1, 1)
    assert [brute_force_makespan(r, 2) for r in inputs] == [4, 4, 4, 3]


def test_proposition_inputs_m3():
    inputs, k = proposition_inputs(3)
    assert k == 8 and len(inputs) == 6
    assert inputs[4] == realization(6, 6, 1, 1, 1, 1, 1, 1)
    assert [brute_force_makespan(r, 3) for r in inputs] == [3, 2, 3, 3, 6, 6]


@pytest.mark.parametrize("m", [4, 5])
def test_proposition_inputs_large_m(m):
    inputs, k = proposition_inputs(m)
    assert k == 2 * m and all(r.n == 2 * m for r in inputs)
    if m == 4:
        assert inputs[1] == realization(3, 3, 1, 1, 1, 1, 1, 1)
    solve = brute_force_makespan if m == 4 else (lambda r, m: optimal_makespan(r, m).lam)
    assert [solve(r, m) for r in inputs] == [2, 3, 3]


def test_proposition_inputs_bad_m():
    with pytest.raises(BadM):
        proposition_inputs(1)


# Two-solution game

def game_by_loops(m, inputs, k):
    """Plain nested loops over unordered pairs, exact ratios, no ranking."""
    parts = list(enumerate_partitions(k, m))
    optima = [brute_force_makespan(Realization(r.sizes[:k]), m) for r in inputs]
    best = None
    for a in range(len(parts)):
        for b in range(a, len(parts)):
            value, _ = game_ratio(parts[a], parts[b], inputs, optima)
            if best is None or value < best[0]:
                best = (value, parts[a], parts[b])
    return best


def test_game_m2_value_and_witness():
    inputs, k = proposition_inputs(2)
    res = two_solution_game_value(2, inputs, k)
    assert res.value == Fraction(5, 4)
    assert res.pairs_checked == 16 * 17 // 2
    expected = game_by_loops(2, inputs, k)
    assert (res.value, res.witness[0], res.witness[1]) == expected
    assert game_ratio(*res.witness, inputs, res.optima)[0] == Fraction(5, 4)


def test_builtin_m2_prefix_attains_the_game_value():
    inputs, k = proposition_inputs(2)
    pair = builtin_pair(2)
    s1, s2 = prefix_partition(pair.first, k), prefix_partition(pair.second, k)
    optima = [brute_force_makespan(r, 2) for r in inputs]
    assert game_ratio(s1, s2, inputs, optima)[0] == Fraction(5, 4)


@pytest.mark.parametrize("seed", range(6))
def test_game_matches_loops_on_random_families(seed):
    rng = random.Random(seed)
    m = rng.choice((2, 3))
    k = rng.randint(3, 6)
    inputs = []
    for _ in range(rng.randint(1, 4)):
        d = rng.choice((1, 2, 3))
        sizes = sorted((Fraction(rng.randint(0, 6), d) for _ in range(k)), reverse=True)
        inputs.append(Realization(tuple(sizes)))
    res = two_solution_game_value(m, inputs, k)
    expected = game_by_loops(m, inputs, k)
    assert (res.value, res.witness[0], res.witness[1]) == expected


def test_game_m3_value():
    inputs, k = proposition_inputs(3)
    assert two_solution_game_value(3, inputs, k).value == Fraction(4, 3)


def test_game_guards():
    inputs, k = proposition_inputs(5)
    with pytest.raises(LimitExceeded):
        two_solution_game_value(5, inputs, k)
    with pytest.raises(BadParameters):
        two_solution_game_value(2, [realization(1, 1, 1, 1, 1, 1)], 5)


# Adversary against finite sets of two-machine rules

def rule_with_type(t, tail=(1, 2)):
    """Two-machine rule whose first t-1 jobs share a machine and job t does not."""
    return AssignmentRule.build(2, [1] * (t - 1) + [2], 2, {0: tail[0], 1: tail[1]})


def test_adversary_types_2_and_3():
    res = adversary_for_solutions([rule_with_type(2), rule_with_type(3)], 2)
    assert res.i == 4
    assert res.instance == realization(4, 4, 4, 3, 3, 3, 3)
    assert res.lam == 12 and brute_force_makespan(res.instance, 2) == 12
    assert all(span >= 13 for span in res.makespans)
    assert res.verified


def test_adversary_single_solution():
    res = adversary_for_solutions([rule_with_type(5)], 1)
    assert res.i == 3
    assert res.instance == realization(3, 3, 2, 2, 2)
    assert res.lam == 6
    assert res.verified


def test_adversary_errors():
    with pytest.raises(NotTwoMachines):
        adversary_for_solutions([builtin_pair(3).first], 1)
    with pytest.raises(InsufficientDefinition):
        adversary_for_solutions([rule_with_type(2)], 2)


@settings(max_examples=60)
@given(st.integers(1, 6), st.data())
def test_adversary_guarantee(M, data):
    rules = []
    for _ in range(M):
        prefix = data.draw(st.lists(st.integers(1, 2), min_size=1, max_size=M + 5))
        period = data.draw(st.integers(1, 4))
        residues = {r: data.draw(st.integers(1, 2)) for r in range(period)}
        rules.append(AssignmentRule.build(2, prefix, period, residues))
    res = adversary_for_solutions(rules, M)
    assert 3 <= res.i <= M + 3
    assert optimal_makespan(res.instance, 2).lam == res.lam
    target = res.i * (res.i - 1) + 1
    for rule in rules:
        assert evaluate(rule, res.instance).makespan >= target
    assert res.ratio_lb >= 1 + Fraction(1, (M + 2) * (M + 3))


# Single-solution bound

TABLE = {
    5: Fraction(155, 107), 6: Fraction(191, 131), 7: Fraction(1127, 767),
    8: Fraction(2278, 1543), 9: Fraction(2593, 1753), 10: Fraction(257, 173),
    11: Fraction(341, 229), 12: Fraction(1873, 1257), 13: Fraction(7449, 4985),
    14: Fraction(201739, 134815), 15: Fraction(217183, 145111), 16: Fraction(2027686, 1352011),
    17: Fraction(3, 2),
}


@pytest.mark.parametrize("m", sorted(TABLE))
def test_lp_bound_matches_table(m):
    res = single_solution_lp_bound(m)
    assert res.reported == TABLE[m]
    assert res.truncated == (m == 17)
    assert res.reported > PREVIOUS_BOUNDS[m]


def test_lp_m5_by_hand():
    res = single_solution_lp_bound(5)
    assert res.choices == ("class1", "class1", "class1", "class3", "class2")
    lhs = Fraction(1, 4) + Fraction(1, 3) + Fraction(1, 2) + Fraction(1, 5) + Fraction(1, 2)
    rhs = 1 + Fraction(1, 4) + Fraction(1, 3) + Fraction(1, 2) + Fraction(1, 2)
    assert res.R == rhs / lhs == Fraction(155, 107)


@pytest.mark.parametrize("m", range(5, 18))
def test_lp_bound_agrees_with_lp_solver(m):
    linprog = pytest.importorskip("scipy.optimize").linprog
    res = single_solution_lp_bound(m)
    # variables rho_1..rho_m, R; minimise R subject to sum rho >= 1 and one
    # constraint per machine as selected
    c = [0.0] * m + [1.0]
    A, b = [[-1.0] * m + [0.0]], [-1.0]
    for i, tag in enumerate(res.choices, start=1):
        row = [0.0] * (m + 1)
        row[i - 1] = 1.0
        if tag == "class1":
            row[m], rhs = -1.0 / (m - i), -1.0 / (m - i)
        elif tag == "class2":
            row[m], rhs = -2.0 / (i - 1), -2.0 / (i - 1)
        else:
            row[m], rhs = -1.0 / m, 0.0
        A.append(row)
        b.append(rhs)
    sol = linprog(c, A_ub=A, b_ub=b, bounds=[(0, None)] * (m + 1), method="highs")
    assert sol.status == 0
    assert sol.x[-1] == pytest.approx(float(res.R), abs=1e-9)


@pytest.mark.parametrize("m", range(5, 18))
def test_lp_constraints_bind(m):
    res = single_solution_lp_bound(m)
    assert sum(res.rho()) == 1
    assert len(res.choices) == m
    assert res.choices.count("class3") == (0 if m % 3 == 0 else 1)


def test_table_range():
    rows = table1(5, 17)
    assert [r.m for r in rows] == list(range(5, 18))
    assert [r.reported for r in rows] == [TABLE[m] for m in range(5, 18)]
    with pytest.raises(BadM):
        table1(4, 6)
    with pytest.raises(BadM):
        table1(9, 8)
    with pytest.raises(BadM):
        single_solution_lp_bound(18)


def test_constraint_choices_middle_machine():
    assert constraint_choices(7)[4] == "class3"
    assert constraint_choices(8)[5] == "class3"
    assert "class3" not in constraint_choices(9)


# Input classes

def test_input_class_examples():
    assert lb_input_class(1, 5, 2, 60).blocks == ((2, 1), (58, Fraction(3, 60)))
    assert lb_input_class(2, 5, 3, 60).blocks == ((8, Fraction(1, 2)), (52, Fraction(1, 60)))
    assert lb_input_class(3, 5, 0, 60).blocks == ((60, Fraction(1, 12)),)


def test_input_class_errors():
    with pytest.raises(BadParameters):
        lb_input_class(1, 5, 5, 60)
    with pytest.raises(BadParameters):
        lb_input_class(2, 5, 1, 60)
    with pytest.raises(BadParameters):
        lb_input_class(4, 5, 1, 60)
    with pytest.raises(DivisibilityViolation):
        lb_input_class(1, 5, 2, 70)


@pytest.mark.parametrize("args", [(1, 5, 2, 60), (3, 5, 0, 60), (2, 5, 5, 60), (2, 6, 2, 120)])
def test_constructive_examples(args):
    res = constructive_schedule_check(*args)
    assert res.ok and res.cost <= 1


def test_constructive_class3_cost_is_exactly_one():
    assert constructive_schedule_check(3, 5, 0, 60).cost == 1


def first_fit_cost(rl, m):
    """Independent check on the expanded input: fill machines to load 1 in job order."""
    loads = [Fraction(0)] * m
    for p in rl.expand():
        i = next((i for i in range(m) if loads[i] + p <= 1), None)
        if i is None:
            return None
        loads[i] += p
    return max(loads)


@pytest.mark.parametrize("m", [5, 6, 7])
def test_constructive_agrees_with_first_fit(m):
    n = 2 * lcm(*range(1, m + 1))
    cases = [(1, i) for i in range(1, m)] + [(2, i) for i in range(2, m + 1)] + [(3, 0)]
    for cls, i in cases:
        rl = lb_input_class(cls, m, i, n)
        ff = first_fit_cost(rl, m)
        assert ff is not None and ff <= 1
        assert constructive_schedule_check(cls, m, i, n).ok
