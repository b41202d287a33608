"""Two-solution ordinal scheduling: solution pairs, exact optimum, lower bounds."""
from .core import (
    PartialSums,
    Rational,
    Realization,
    RunLengthRealization,
    format_rational,
    partial_sums,
    progression_suffix_bound,
    realization,
    to_rational,
    validate_realization,
)
from .lowerbounds import (
    adversary_for_solutions,
    constructive_schedule_check,
    enumerate_partitions,
    lb_input_class,
    proposition_inputs,
    single_solution_lp_bound,
    table1,
    two_solution_game_value,
)
from .oracle import brute_force_makespan, lpt_makespan, optimal_lower_bound, optimal_makespan
from .patterns import (
    AssignmentRule,
    SolutionPair,
    builtin_pair,
    evaluate,
    machine_of,
    pair_evaluate,
    solution_type,
    validate_rule,
)
from .verify import (
    competitive_ratio,
    proof_inequality_report,
    random_realization,
    stress_search,
    tightness_instance,
)

__version__ = "0.1.0"
