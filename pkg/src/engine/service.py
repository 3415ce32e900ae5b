"""
Solver dispatch shared by the CLI and the HTTP service
Times each phase, re-validates every result independently and cross-checks algorithms.
"""

import time
from contextlib import contextmanager
from typing import Dict, Iterator, List, Optional

from models.cover_models import CheckReport, InputDigest, SolveReport
from models.run_config import Algorithm, RunConfig
from utils.logger import get_logger
from .cover_engine import odot_prefix_solve, simple_solve
from .errors import ResourceBudgetError, SolverDisagreementError
from .fpt_solver import fpt_solve_general, fpt_solve_partial
from .istring import IString, format_istring
from .lcp_index import build_index
from .oracle import brute_shortest_cover, validate_cover_result

logger = get_logger(__name__)

EXACT = (Algorithm.SIMPLE, Algorithm.FPT, Algorithm.PARTIAL, Algorithm.ORACLE)


@contextmanager
def _phase(timings: Dict[str, float], name: str) -> Iterator[None]:
    started = time.perf_counter()
    try:
        yield
    finally:
        timings[name] = timings.get(name, 0.0) + (time.perf_counter() - started) * 1e6


def describe(text: IString) -> InputDigest:
    return InputDigest(n=text.n, k=text.k, sigma=text.sigma, partial=text.is_partial_word)


def _run(text: IString, algorithm: Algorithm, config: RunConfig, timings: Dict[str, float]):
    if algorithm == Algorithm.SIMPLE:
        with _phase(timings, "solve"):
            return simple_solve(text, config.max_prefixes), None
    if algorithm == Algorithm.ORACLE:
        with _phase(timings, "solve"):
            report = brute_shortest_cover(text, config.oracle_budget)
        return report.shortest, report.all_lengths
    with _phase(timings, "index"):
        index = build_index(text)
        # lcp(1, ·) is part of the index phase
        _ = index.prefix_lcps
    with _phase(timings, "solve"):
        if algorithm == Algorithm.ODOT:
            return odot_prefix_solve(index), None
        if algorithm == Algorithm.FPT:
            return fpt_solve_general(index, config.max_subsets, config.table_max_k), None
        if algorithm == Algorithm.PARTIAL:
            return fpt_solve_partial(index, config.max_subsets), None
    raise ValueError(f"unknown algorithm {algorithm}")


def solve(text: IString, config: Optional[RunConfig] = None) -> SolveReport:
    """
    Run the configured algorithm

    auto: partial words take the √k path, other i-strings the general FPT path,
    falling back to the simple solver when an FPT budget refuses.
    """
    config = config or RunConfig()
    algorithm = config.algorithm
    timings: Dict[str, float] = {}
    if algorithm == Algorithm.AUTO:
        algorithm = Algorithm.PARTIAL if text.is_partial_word else Algorithm.FPT
        try:
            result, lengths = _run(text, algorithm, config, timings)
        except ResourceBudgetError as exc:
            logger.warning(f"{algorithm.value} refused ({exc}); falling back to simple")
            algorithm = Algorithm.SIMPLE
            result, lengths = _run(text, algorithm, config, timings)
    else:
        result, lengths = _run(text, algorithm, config, timings)

    with _phase(timings, "validate"):
        validated = result is not None and validate_cover_result(result, text)
    if not validated:
        raise SolverDisagreementError(
            f"{algorithm.value} returned {result} which fails the independent cover check on {format_istring(text, header=False)}"
        )
    logger.info(f"{algorithm.value}: length={result.length}, witness={result.witness}")
    return SolveReport(
        input=describe(text),
        result=result,
        algorithm=algorithm.value,
        timings=timings,
        validated=validated,
        all_lengths=lengths,
    )


def check(text: IString, config: Optional[RunConfig] = None, with_oracle: bool = True) -> CheckReport:
    """
    Run every applicable algorithm on one input and compare lengths and witnesses

    Exact solvers must agree with each other (and the oracle when it fits the budget) on
    the length and on the lowest-rank witness; the ⊙-prefix solver only bounds the length
    from above.
    """
    config = config or RunConfig()
    report = CheckReport(text=format_istring(text, header=False), input=describe(text))
    algorithms: List[Algorithm] = [Algorithm.SIMPLE, Algorithm.ODOT, Algorithm.FPT]
    if text.is_partial_word:
        algorithms.append(Algorithm.PARTIAL)
    if with_oracle:
        algorithms.append(Algorithm.ORACLE)

    for algorithm in algorithms:
        try:
            report.reports.append(solve(text, config.model_copy(update={"algorithm": algorithm})))
        except ResourceBudgetError as exc:
            logger.warning(f"check: {algorithm.value} skipped ({exc})")
        except SolverDisagreementError as exc:
            report.disagreements.append(str(exc))

    exact = {r.algorithm: r.result for r in report.reports if Algorithm(r.algorithm) in EXACT}
    if exact:
        reference = exact.get(Algorithm.ORACLE.value) or min(
            exact.values(), key=lambda result: (result.length, text.alphabet.ranks(result.witness))
        )
        report.expected_length = reference.length
        report.expected_witness = reference.witness
        for name, result in exact.items():
            if result.length != reference.length:
                report.disagreements.append(f"{name} reports {result.length}, expected {reference.length}")
            elif result.witness != reference.witness:
                report.disagreements.append(f"{name} reports witness {result.witness}, expected {reference.witness}")
        for r in report.reports:
            if r.algorithm == Algorithm.ODOT.value and r.result.length < report.expected_length:
                report.disagreements.append(
                    f"odot reports {r.result.length}, below the exact length {report.expected_length}"
                )
    return report
