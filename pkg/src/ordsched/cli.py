"""Command-line front end.

Exit codes: 0 success, 1 a checked property is false, 2 bad usage or input.
Rationals are always printed as ``"num/den"`` strings.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import core, lowerbounds, oracle, patterns, verify
from .core import decimal_string, format_rational as fr
from .errors import OrdschedError

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not valid JSON ({exc.msg})") from exc


def _rational_arg(text: str) -> Fraction:
    try:
        return core.to_rational(text)
    except OrdschedError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _pair(arg: str, m: int) -> patterns.SolutionPair:
    if arg == "builtin":
        return patterns.builtin_pair(m)
    pair = patterns.pair_from_json(_load_json(arg))
    if pair.m != m:
        raise UsageError(f"pair file is for m={pair.m}, but --m {m} was given")
    return pair


def _input(path: str) -> core.Realization:
    return core.realization_from_json(_load_json(path))


def _evaluation(e: patterns.Evaluation) -> dict:
    return {"loads": [fr(x) for x in e.loads], "makespan": fr(e.makespan)}


def _report_rows(report: verify.ProofReport) -> list[dict]:
    return [{"label": it.label, "lhs": fr(it.lhs), "rhs": fr(it.rhs), "holds": it.holds}
            for it in report.items]


def _lp_row(res: lowerbounds.LPResult) -> dict:
    return {
        "m": res.m,
        "fraction": fr(res.reported),
        "decimal": decimal_string(res.reported),
        "truncated": res.truncated,
    }


# subcommands: each returns (payload, exit code)

def cmd_eval(args):
    pair = _pair(args.pair, args.m)
    ev = patterns.pair_evaluate(pair, _input(args.input))
    return {"first": _evaluation(ev.first), "second": _evaluation(ev.second),
            "pair_makespan": fr(ev.pair_makespan)}, EXIT_OK


def cmd_opt(args):
    r = _input(args.input)
    res = oracle.optimal_makespan(r, args.m, limit=args.limit)
    return {"lambda": fr(res.lam), "witness": list(res.witness),
            "nodes_explored": res.nodes_explored}, EXIT_OK


def cmd_ratio(args):
    pair = _pair(args.pair, args.m)
    r = _input(args.input)
    lam = oracle.optimal_makespan(r, args.m, limit=args.limit).lam
    ratio = verify.competitive_ratio(pair, r, lam=lam)
    return {"ratio": fr(ratio), "decimal": decimal_string(ratio),
            "pair_makespan": fr(verify.pair_makespan_exact(pair, r)), "lambda": fr(lam)}, EXIT_OK


def cmd_ineq(args):
    report = verify.proof_inequality_report(args.m, _input(args.input), limit=args.limit)
    return _report_rows(report), EXIT_OK if report.all_hold else EXIT_VIOLATED


def cmd_stress(args):
    pair = _pair(args.pair, args.m)
    bound = args.bound if args.bound is not None else patterns.BUILTIN_BOUNDS.get(args.m)
    if bound is None:
        raise UsageError("--bound is required when m has no built-in guarantee")
    models = tuple(verify.SizeModel.parse(s) for s in args.models) if args.models else verify.DEFAULT_MODELS
    res = verify.stress_search(pair, bound, args.trials, args.max_n, args.seed, models=models,
                               battery=not args.no_battery)
    payload = {
        "trials": res.trials,
        "checked": res.checked,
        "max_ratio": fr(res.max_ratio),
        "decimal": decimal_string(res.max_ratio),
        "witness": core.realization_to_json(res.witness)["sizes"],
        "bound": fr(res.bound),
        "ok": res.ok,
    }
    return payload, EXIT_OK if res.ok else EXIT_VIOLATED


def cmd_game(args):
    if args.inputs:
        obj = _load_json(args.inputs)
        items = obj.get("inputs") if isinstance(obj, dict) else obj
        if not isinstance(items, list):
            raise UsageError('inputs file must be a list or {"inputs": [...]}')
        inputs = [core.realization_from_json(x) for x in items]
        k = args.k if args.k is not None else max(r.n for r in inputs)
    else:
        inputs, k = lowerbounds.proposition_inputs(args.m)
        k = args.k if args.k is not None else k
    res = lowerbounds.two_solution_game_value(args.m, inputs, k, allow_long=args.allow_long)
    payload = {
        "m": res.m,
        "k": res.k,
        "inputs": [core.realization_to_json(r)["sizes"] for r in res.inputs],
        "optima": [fr(x) for x in res.optima],
        "value": fr(res.value),
        "decimal": decimal_string(res.value),
        "witness": {"s1_labels": list(res.witness[0].labels),
                    "s2_labels": list(res.witness[1].labels),
                    "worst_input": res.worst_input_index},
        "per_pair_checked": res.pairs_checked,
    }
    code = EXIT_OK
    if args.expect is not None:
        payload["expect"] = fr(args.expect)
        payload["ok"] = res.value >= args.expect
        code = EXIT_OK if payload["ok"] else EXIT_VIOLATED
    return payload, code


def cmd_lp(args):
    res = lowerbounds.single_solution_lp_bound(args.m)
    return {
        "R": fr(res.reported),
        "decimal": decimal_string(res.reported),
        "truncated": res.truncated,
        "m": res.m,
        "raw_R": fr(res.R),
        "A": fr(res.A),
        "B": fr(res.B),
        "choices": list(res.choices),
    }, EXIT_OK


def cmd_table1(args):
    return [_lp_row(r) for r in lowerbounds.table1(args.m_from, args.m_to)], EXIT_OK


def cmd_adversary(args):
    obj = _load_json(args.solutions)
    items = obj.get("solutions") if isinstance(obj, dict) else obj
    if not isinstance(items, list):
        raise UsageError('solutions file must be a list of rules or {"solutions": [...]}')
    rules = [patterns.rule_from_json(x) for x in items]
    M = obj.get("M") if isinstance(obj, dict) else None
    res = lowerbounds.adversary_for_solutions(rules, M)
    target = res.i * (res.i - 1) + 1
    payload = {
        "i": res.i,
        "instance": core.realization_to_json(res.instance)["sizes"],
        "lambda": fr(res.lam),
        "ratio_lb": fr(res.ratio_lb),
        "solutions": [{"type": t, "makespan": fr(s), "verified": s >= target}
                      for t, s in zip(res.types, res.makespans)],
        "verified": res.verified,
    }
    return payload, EXIT_OK if res.verified else EXIT_VIOLATED


def cmd_tightness(args):
    r, ratio = verify.tightness_ratio(args.m, args.K)
    blocks = core.run_length_to_json(core.RunLengthRealization.from_realization(r))
    return {"m": args.m, "K": args.K, "instance": blocks, "lambda": "1",
            "ratio": fr(ratio), "decimal": decimal_string(ratio)}, EXIT_OK


def cmd_lb_check(args):
    inst = lowerbounds.lb_input_class(args.cls, args.m, args.i, args.n)
    res = lowerbounds.constructive_schedule_check(args.cls, args.m, args.i, args.n)
    return {"instance": core.run_length_to_json(inst), "cost": fr(res.cost), "ok": res.ok,
            "groups": [{"machines": g, "large_each": b, "small_capacity": c}
                       for g, b, c in res.groups]}, EXIT_OK if res.ok else EXIT_VIOLATED


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    group = fmt.add_mutually_exclusive_group()
    group.add_argument("--json", dest="fmt", action="store_const", const="json",
                       default=argparse.SUPPRESS, help="JSON output (default)")
    group.add_argument("--csv", dest="fmt", action="store_const", const="csv",
                       default=argparse.SUPPRESS, help="CSV output")
    fmt.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="base seed for random draws")

    parser = argparse.ArgumentParser(prog="ordsched", parents=[fmt],
                                     description="Two-solution ordinal scheduling toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[fmt], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("eval", cmd_eval, "loads and makespans of a solution pair")
    p.add_argument("--m", type=int, required=True, help="number of machines")
    p.add_argument("--pair", default="builtin", help="pair JSON file, or builtin")
    p.add_argument("--input", required=True, help="realization JSON file")

    p = add("opt", cmd_opt, "optimal offline makespan")
    p.add_argument("--m", type=int, required=True, help="number of machines")
    p.add_argument("--input", required=True, help="realization JSON file")
    p.add_argument("--limit", type=int, default=oracle.DEFAULT_LIMIT, help="largest n the exact search accepts")

    p = add("ratio", cmd_ratio, "exact ratio of a pair on one realization")
    p.add_argument("--m", type=int, required=True, help="number of machines")
    p.add_argument("--pair", default="builtin", help="pair JSON file, or builtin")
    p.add_argument("--input", required=True, help="realization JSON file")
    p.add_argument("--limit", type=int, default=oracle.DEFAULT_LIMIT, help="largest n the exact search accepts")

    p = add("ineq", cmd_ineq, "load inequalities of the built-in pair")
    p.add_argument("--m", type=int, required=True, help="number of machines")
    p.add_argument("--input", required=True, help="realization JSON file")
    p.add_argument("--limit", type=int, default=oracle.DEFAULT_LIMIT, help="largest n the exact search accepts")

    p = add("stress", cmd_stress, "random search for the worst ratio")
    p.add_argument("--m", type=int, required=True, help="number of machines")
    p.add_argument("--pair", default="builtin", help="pair JSON file, or builtin")
    p.add_argument("--bound", type=_rational_arg)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-n", dest="max_n", type=int, default=12)
    p.add_argument("--models", nargs="+", metavar="KIND:PARAM",
                   help="size models such as integer:8 grid:12")
    p.add_argument("--no-battery", action="store_true", help="skip the fixed adversarial inputs")

    p = add("game-lb", cmd_game, "exhaustive two-solution game value")
    p.add_argument("--m", type=int, required=True, help="number of machines")
    p.add_argument("--inputs", help="JSON list of realizations (default: the built-in adversarial inputs)")
    p.add_argument("--k", type=int, help="prefix length to partition")
    p.add_argument("--allow-long", action="store_true", help="permit searches with very many partitions")
    p.add_argument("--expect", type=_rational_arg, help="exit 1 if the value is below this")

    p = add("lp-lb", cmd_lp, "single-solution lower bound for one m")
    p.add_argument("--m", type=int, required=True, help="number of machines")

    p = add("table1", cmd_table1, "single-solution lower bounds for a range of m")
    p.add_argument("--from", dest="m_from", type=int, default=5)
    p.add_argument("--to", dest="m_to", type=int, default=17)

    p = add("adversary", cmd_adversary, "instance defeating a set of two-machine solutions")
    p.add_argument("--solutions", required=True, help="JSON list of two-machine rules")

    p = add("tightness", cmd_tightness, "ratio of the built-in pair on the tightness instance")
    p.add_argument("--m", type=int, required=True, help="number of machines")
    p.add_argument("--K", type=int, required=True, help="number of tiny jobs")

    p = add("lb-check", cmd_lb_check, "constructive schedule for a lower-bound input class")
    p.add_argument("--class", dest="cls", type=int, required=True, choices=(1, 2, 3))
    p.add_argument("--m", type=int, required=True, help="number of machines")
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    return parser


def _flatten(row: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in row.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        else:
            flat[name] = value
    return flat


def _csv(payload) -> str:
    rows = [_flatten(row) for row in (payload if isinstance(payload, list) else [payload])]
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v
                             for k, v in row.items()})
    return buf.getvalue()


def render(payload, fmt: str) -> str:
    if fmt == "csv":
        return _csv(payload)
    return json.dumps(payload, indent=2) + "\n"


def run_command(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "seed"):
        args.seed = 0
    try:
        payload, code = args.func(args)
    except (OrdschedError, UsageError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_USAGE
    out.write(render(payload, getattr(args, "fmt", "json")))
    return code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
