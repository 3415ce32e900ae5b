"""
Brute-force reference implementations
Ground truth for tests and the `--algo oracle` path. Nothing here touches the LCP index.
"""

from __future__ import annotations

import itertools
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import ORACLE_BUDGET, SAT_MAX_VARS
from models.cover_models import CoverResult, OracleReport
from models.reduction_models import CnfFormula
from utils.logger import get_logger
from .cover_engine import minimize_covering_set
from .errors import ResourceBudgetError
from .istring import IString
from .resources import ResourceGuard

logger = get_logger(__name__)

Word = Union[str, Sequence[int]]


def _as_ranks(word: Word, text: IString) -> Optional[Tuple[int, ...]]:
    if isinstance(word, str):
        if any(c not in text.alphabet for c in word):
            return None
        return text.alphabet.ranks(word)
    return tuple(word)


def naive_occurrences(word: Word, text: IString) -> List[int]:
    """Every j with S ≈ T[j..j+|S|-1], by direct membership tests"""
    ranks = _as_ranks(word, text)
    if not ranks or len(ranks) > text.n:
        return []
    windows = text.n - len(ranks) + 1
    membership = text.membership
    hit = np.ones(windows, dtype=bool)
    for t, r in enumerate(ranks):
        hit &= membership[t:t + windows, r]
    return (np.flatnonzero(hit) + 1).tolist()


def _covers(occ: List[int], length: int, n: int) -> bool:
    if not occ or occ[0] != 1:
        return False
    bounds = occ + [n + 1]
    return max(b - a for a, b in zip(bounds, bounds[1:])) <= length


def is_cover(word: Word, text: IString) -> bool:
    """Every position of T lies inside some occurrence of the solid string S"""
    ranks = _as_ranks(word, text)
    if not ranks:
        return False
    return _covers(naive_occurrences(ranks, text), len(ranks), text.n)


def validate_cover_result(result: CoverResult, text: IString) -> bool:
    """Witness length, occurrence at every covering position, gaps ≤ length"""
    ranks = _as_ranks(result.witness, text)
    if ranks is None or len(ranks) != result.length:
        return False
    occ = set(naive_occurrences(ranks, text))
    if not result.covering_set or any(i not in occ for i in result.covering_set):
        return False
    return _covers(list(result.covering_set), result.length, text.n)


def brute_shortest_cover(
    text: IString,
    budget: int = ORACLE_BUDGET,
    max_length: Optional[int] = None,
) -> OracleReport:
    """
    Every cover occurs at 1, so enumerating the solid completions of each prefix
    T[1..m] finds all of them.

    Args:
        text: input i-string
        budget: maximum number of solid candidates; refuses up front beyond it
        max_length: only consider m ≤ max_length

    Returns:
        OracleReport with every feasible length and all shortest witnesses
    """
    n = text.n
    limit = n if max_length is None else min(max_length, n)
    guard = ResourceGuard("oracle_budget", budget, hint="raise --oracle-budget / ICOVER_ORACLE_BUDGET")
    total = 0
    for m in range(1, limit + 1):
        total += text.completion_count(1, m)
        if total > budget:
            break
    guard.require(total)

    lengths: List[int] = []
    witnesses: List[str] = []
    shortest: Optional[CoverResult] = None
    for m in range(1, limit + 1):
        found_here = False
        for ranks in text.completions(1, m):
            guard.charge()
            occ = naive_occurrences(ranks, text)
            if not _covers(occ, m, n):
                continue
            if not found_here:
                found_here = True
                lengths.append(m)
                if shortest is not None:
                    # only the shortest length keeps witnesses
                    break
                shortest = CoverResult(
                    length=m,
                    witness=text.alphabet.word(ranks),
                    covering_set=minimize_covering_set(occ, m, n),
                    algorithm="oracle",
                )
            witnesses.append(text.alphabet.word(ranks))

    logger.debug(f"oracle: n={n}, enumerated={guard.used}, lengths={lengths}")
    return OracleReport(
        shortest=shortest,
        all_lengths=lengths,
        shortest_witnesses=witnesses,
        max_length=max_length,
        enumerated=guard.used,
    )


# --- Universal Mismatch and SAT ---------------------------------------------------

def partial_words_match(u: str, v: str) -> bool:
    """Binary partial words match: equal length, '?' matches anything"""
    return len(u) == len(v) and all(a == b or a == "?" or b == "?" for a, b in zip(u, v))


def iter_universal_mismatch_solutions(
    words: Sequence[str],
    length: Optional[int] = None,
    budget: int = ORACLE_BUDGET,
) -> Iterator[str]:
    """Every V ∈ {?, 0, 1}^p with V ≉ W for all W, '?' tried first at each cell"""
    if length is None:
        if not words:
            raise ValueError("length is required when there are no words")
        length = len(words[0])
    ResourceGuard("oracle_budget", budget, hint="raise --oracle-budget").require(3 ** length)
    for cells in itertools.product("?01", repeat=length):
        candidate = "".join(cells)
        if not any(partial_words_match(candidate, w) for w in words):
            yield candidate


def brute_universal_mismatch(
    words: Sequence[str],
    length: Optional[int] = None,
    budget: int = ORACLE_BUDGET,
) -> Optional[str]:
    return next(iter_universal_mismatch_solutions(words, length, budget), None)


def find_model(formula: CnfFormula, max_vars: int = SAT_MAX_VARS) -> Optional[Tuple[bool, ...]]:
    """Truth-table search; returns the first satisfying assignment (x_1..x_p)"""
    if formula.p > max_vars:
        raise ResourceBudgetError("sat_max_vars", max_vars, formula.p, "raise ICOVER_SAT_MAX_VARS")
    for assignment in itertools.product((False, True), repeat=formula.p):
        if all(any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in formula.clauses):
            return assignment
    return None


def brute_sat(formula: CnfFormula, max_vars: int = SAT_MAX_VARS) -> bool:
    return find_model(formula, max_vars) is not None
