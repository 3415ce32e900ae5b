"""
icover command line
solve, check, gen, reduce, bench and config subcommands.

Exit codes: 0 success, 1 input error, 2 resource budget refusal, 3 solver disagreement.
"""

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import DEFAULT_SEED, DIMACS_STRICT, print_config, validate_config
from engine.errors import ResourceBudgetError, SolverDisagreementError
from engine.generator import random_instances
from engine.istring import IString, format_istring, parse_istring, split_records
from engine.reduction import build_reduction, cnf_to_mismatch, parse_dimacs, verify_reduction
from engine.service import check, solve
from models.cover_models import BenchRow, CheckReport, SolveReport
from models.run_config import Algorithm, OutputFormat, RunConfig
from utils.logger import get_logger, set_console_level

logger = get_logger("icover")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
EXIT_DISAGREEMENT = 3

BENCH_SUITES = {
    # (n, k, sigma, partial)
    "scaling": [(1_000, 6, 4, True), (10_000, 6, 4, True), (100_000, 6, 4, True)],
    "small": [(12, 2, 2, True), (12, 4, 2, True), (16, 2, 3, False), (16, 4, 3, False)],
}
BENCH_ALGOS = [Algorithm.SIMPLE, Algorithm.ODOT, Algorithm.FPT, Algorithm.PARTIAL]


def _read_source(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _run_config(args: argparse.Namespace) -> RunConfig:
    overrides = {}
    for name in ("max_prefixes", "max_subsets", "table_max_k", "oracle_budget", "seed"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "algo", None):
        overrides["algorithm"] = Algorithm(args.algo)
    if getattr(args, "json", False):
        overrides["output"] = OutputFormat.JSON
    return RunConfig(**overrides)


def _print_solve(report: SolveReport, config: RunConfig) -> None:
    if config.output == OutputFormat.JSON:
        print(json.dumps(report.to_json_dict()))
        return
    data = report.to_json_dict()
    print(f"length: {data['length']}")
    print(f"witness: {data['witness']}")
    print(f"covering_set: {' '.join(str(i) for i in data['covering_set'])}")
    if report.all_lengths is not None:
        print(f"all_lengths: {' '.join(str(m) for m in report.all_lengths)}")
    print(f"algo: {data['algo']}")
    print(f"micros: {data['micros']}")


def _print_check(report: CheckReport, config: RunConfig) -> None:
    if config.output == OutputFormat.JSON:
        print(json.dumps({
            "text": report.text,
            "expected_length": report.expected_length,
            "results": [r.to_json_dict() for r in report.reports],
            "disagreements": report.disagreements,
        }))
        return
    status = "ok" if report.agreed else "DISAGREEMENT"
    algos = " ".join(f"{r.algorithm}={r.result.length}" for r in report.reports)
    print(f"{status} {report.text} length={report.expected_length} {algos}")
    for message in report.disagreements:
        print(f"  {message}")


# --- commands -------------------------------------------------------------------

def cmd_solve(args: argparse.Namespace) -> int:
    config = _run_config(args)
    records = split_records(_read_source(args.path))
    if len(records) > 1:
        raise ValueError(f"input holds {len(records)} i-strings; solve takes one, check takes several")
    text = parse_istring(records[0] if records else "", args.alphabet)
    _print_solve(solve(text, config), config)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    config = _run_config(args)
    if args.path:
        records = split_records(_read_source(args.path))
        inputs: List[IString] = [parse_istring(record, args.alphabet) for record in records]
        if not inputs:
            raise ValueError("no i-string in input")
    else:
        seed = DEFAULT_SEED if args.seed is None else args.seed
        inputs = list(random_instances(seed, args.count, args.n, args.k, args.sigma, args.partial))
    failed = 0
    for text in inputs:
        report = check(text, config, with_oracle=not args.no_oracle)
        if not report.agreed or args.path or config.output == OutputFormat.JSON:
            _print_check(report, config)
        if not report.agreed:
            failed += 1
    if not args.path and config.output == OutputFormat.PLAIN:
        print(f"checked {len(inputs)} instances, {failed} disagreements")
    if failed:
        raise SolverDisagreementError(f"{failed} of {len(inputs)} instances disagree")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "random":
        seed = DEFAULT_SEED if args.seed is None else args.seed
        instances = random_instances(seed, args.count, args.n, args.k, args.sigma, args.partial)
        # each instance carries its alphabet so the file re-parses to the same i-strings
        body = "\n".join(format_istring(t, header=True) for t in instances) + "\n"
        if args.out:
            Path(args.out).write_text(body, encoding="utf-8")
        else:
            sys.stdout.write(body)
        return EXIT_OK

    if not args.cnf:
        raise ValueError("gen sat needs a DIMACS file")
    formula = parse_dimacs(_read_source(args.cnf), strict=not args.lenient)
    output = build_reduction(cnf_to_mismatch(formula))
    sidecar = json.dumps(output.sidecar())
    if args.out:
        target = Path(args.out)
        target.write_text(output.text + "\n", encoding="utf-8")
        target.with_name(target.name + ".json").write_text(sidecar + "\n", encoding="utf-8")
        logger.info(f"wrote {target} ({output.length} cells, d={output.d})")
    else:
        print(output.text)
        print(sidecar)
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    formula = parse_dimacs(_read_source(args.cnf), strict=not args.lenient)
    instance = cnf_to_mismatch(formula)
    report = verify_reduction(instance, budget=args.oracle_budget or RunConfig().oracle_budget,
                              max_solutions=args.max_solutions)
    if args.json:
        print(report.model_dump_json())
    else:
        print(f"p={report.p} m={report.m} d={report.d} satisfiable={report.satisfiable}")
        print(f"shortest_length: {report.shortest_length}")
        print(f"witness: {report.witness}")
        print(f"decoded: {report.decoded}")
        print(f"solutions_checked: {report.solutions_checked}")
        print(f"passed: {report.passed}")
        for failure in report.failures:
            print(f"  {failure}")
    if not report.passed:
        raise SolverDisagreementError("; ".join(report.failures))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    config = _run_config(args)
    algos = [Algorithm(a) for a in args.algos] if args.algos else list(BENCH_ALGOS)
    if args.with_oracle and Algorithm.ORACLE not in algos:
        algos.append(Algorithm.ORACLE)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(BenchRow.header())
    seed = DEFAULT_SEED if args.seed is None else args.seed
    for offset, (n, k, sigma, partial) in enumerate(BENCH_SUITES[args.suite]):
        text = next(random_instances(seed + offset, 1, n, k, sigma, partial))
        for algo in algos:
            if algo == Algorithm.PARTIAL and not text.is_partial_word:
                continue
            try:
                report = solve(text, config.model_copy(update={"algorithm": algo}))
            except ResourceBudgetError as exc:
                logger.warning(f"bench: {algo.value} skipped on n={n} ({exc})")
                continue
            row = BenchRow(n=n, k=k, sigma=sigma, algo=algo.value, micros=report.micros,
                           length=report.result.length)
            writer.writerow(row.as_row())
    return EXIT_OK


def cmd_config(args: argparse.Namespace) -> int:
    validate_config()
    print_config()
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------------

def _add_budgets(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-prefixes", dest="max_prefixes", type=int)
    parser.add_argument("--max-subsets", dest="max_subsets", type=int)
    parser.add_argument("--table-max-k", dest="table_max_k", type=int)
    parser.add_argument("--oracle-budget", dest="oracle_budget", type=int)


def _add_random(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--count", type=int, default=1)
    parser.add_argument("--n", type=int, default=12)
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--sigma", type=int, default=2)
    parser.add_argument("--partial", action="store_true")
    parser.add_argument("--seed", type=int)


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="icover",
        description="Shortest solid covers of indeterminate strings and partial words.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug (stderr)")
    sub = parser.add_subparsers(dest="command", required=True)

    solve_p = sub.add_parser("solve", help="shortest cover of one i-string")
    solve_p.add_argument("path", nargs="?", help="input file (stdin when omitted or '-')")
    solve_p.add_argument("--alphabet")
    solve_p.add_argument("--algo", choices=[a.value for a in Algorithm], default=Algorithm.AUTO.value)
    solve_p.add_argument("--json", action="store_true")
    _add_budgets(solve_p)
    solve_p.set_defaults(handler=cmd_solve)

    check_p = sub.add_parser("check", help="cross-validate every algorithm")
    check_p.add_argument("path", nargs="?", help="input file; random instances when omitted")
    check_p.add_argument("--alphabet")
    check_p.add_argument("--no-oracle", dest="no_oracle", action="store_true")
    check_p.add_argument("--json", action="store_true")
    _add_random(check_p)
    _add_budgets(check_p)
    check_p.set_defaults(handler=cmd_check)

    gen_p = sub.add_parser("gen", help="generate instances")
    gen_p.add_argument("kind", choices=["random", "sat"])
    gen_p.add_argument("cnf", nargs="?", help="DIMACS file (sat kind)")
    gen_p.add_argument("--out", help="output file; sat writes OUT and OUT.json")
    gen_p.add_argument("--lenient", action="store_true", default=not DIMACS_STRICT,
                       help="drop tautological clauses instead of rejecting them")
    _add_random(gen_p)
    gen_p.set_defaults(handler=cmd_gen)

    reduce_p = sub.add_parser("reduce", help="build and verify the reduction word of a CNF formula")
    reduce_p.add_argument("cnf", help="DIMACS file ('-' for stdin)")
    reduce_p.add_argument("--lenient", action="store_true", default=not DIMACS_STRICT)
    reduce_p.add_argument("--max-solutions", dest="max_solutions", type=int, default=64)
    reduce_p.add_argument("--oracle-budget", dest="oracle_budget", type=int)
    reduce_p.add_argument("--json", action="store_true")
    reduce_p.set_defaults(handler=cmd_reduce)

    bench_p = sub.add_parser("bench", help="timing CSV on stdout")
    bench_p.add_argument("--suite", choices=sorted(BENCH_SUITES), default="small")
    bench_p.add_argument("--algos", nargs="+", choices=[a.value for a in Algorithm if a != Algorithm.AUTO])
    bench_p.add_argument("--with-oracle", dest="with_oracle", action="store_true")
    bench_p.add_argument("--seed", type=int)
    _add_budgets(bench_p)
    bench_p.set_defaults(handler=cmd_bench)

    config_p = sub.add_parser("config", help="print the effective configuration")
    config_p.set_defaults(handler=cmd_config)

    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = _parse_args(argv)
    if args.verbose:
        set_console_level(logging.DEBUG if args.verbose > 1 else logging.INFO)
    try:
        return args.handler(args)
    except ResourceBudgetError as exc:
        print(f"icover: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SolverDisagreementError as exc:
        print(f"icover: disagreement: {exc}", file=sys.stderr)
        return EXIT_DISAGREEMENT
    except (ValueError, OSError) as exc:
        print(f"icover: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
