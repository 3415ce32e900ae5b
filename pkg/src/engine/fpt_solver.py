"""
FPT solvers
Ambiguous positions, TestCover with the 2^k solid-column table, the general
exact solver and the √k solver for partial words.
"""

from __future__ import annotations

import math
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import MAX_SUBSETS, TABLE_MAX_K
from models.cover_models import CoverResult
from utils.logger import get_logger
from .cover_engine import Candidate, trivial_cover, better, odot_candidate, to_cover_result
from .errors import NotPartialWordError, ResourceBudgetError
from .istring import IString, mask_members
from .lcp_index import LcpIndex
from .resources import ResourceGuard

logger = get_logger(__name__)


def ambiguous_positions(text: IString) -> List[int]:
    """A = { z - z' + 1 : z ≥ z' non-solid }, ascending"""
    zs = text.nonsolid_positions
    return sorted({z - w + 1 for z in zs for w in zs if z >= w})


class SolidColumnTable:
    """
    For every subset X of the non-solid positions, the lowest rank common to all T[z], z ∈ X.

    Each symbol is reduced to the mask of non-solid cells containing it (at most 2^k
    distinct masks); a superset-to-subset min pass then fills every entry.
    """

    def __init__(self, text: IString, max_k: int = TABLE_MAX_K):
        k = text.k
        if k > max_k:
            raise ResourceBudgetError(
                "table_max_k", max_k, k,
                "raise --table-max-k / ICOVER_TABLE_MAX_K or use --algo simple",
            )
        ResourceGuard("table_max_k", max_k).check_memory(4 * (1 << k))
        self.k = k
        self.sigma = text.sigma
        self.z_index = {z: a for a, z in enumerate(text.nonsolid_positions)}
        column_masks = [0] * text.sigma
        for a, z in enumerate(text.nonsolid_positions):
            for r in mask_members(text.cells[z - 1]):
                column_masks[r] |= 1 << a
        table = np.full(1 << k, text.sigma, dtype=np.int32)
        for r, mask in enumerate(column_masks):
            if r < table[mask]:
                table[mask] = r
        for bit in range(k):
            view = table.reshape(-1, 2, 1 << bit)
            np.minimum(view[:, 0, :], view[:, 1, :], out=view[:, 0, :])
        self.table = table
        self.distinct_columns = len(set(column_masks))
        logger.debug(f"solid column table: k={k}, {self.distinct_columns} distinct symbol columns")

    def entry(self, subset_mask: int) -> Optional[int]:
        value = int(self.table[subset_mask])
        return None if value >= self.sigma else value

    def common_symbol(self, positions: Sequence[int]) -> Optional[int]:
        """Lowest rank in ∩ T[z] over non-solid positions z, None if that set is empty"""
        mask = 0
        for z in positions:
            mask |= 1 << self.z_index[z]
        return self.entry(mask)


def _test_cover_ranks(
    index: LcpIndex,
    positions: Sequence[int],
    table: Optional[SolidColumnTable] = None,
) -> Optional[Tuple[int, ...]]:
    text = index.text
    n = text.n
    P = sorted(set(positions))
    if not P or P[0] != 1:
        return None
    m = n + 1 - P[-1]
    gaps = [b - a for a, b in zip(P, P[1:] + [n + 1])]
    if max(gaps) > m:
        return None
    lcp1 = index.prefix_lcps
    if any(lcp1[i - 1] < m for i in P):
        return None

    ranks = [text.code(t) for t in range(1, m + 1)]
    cells = text.cells
    partial = text.is_partial_word
    for z in text.nonsolid_positions:
        if z > m:
            break
        column = [i + z - 1 for i in P]
        solid_codes = {text.code(c) for c in column if text.is_solid(c)}
        if partial:
            if len(solid_codes) > 1:
                return None
            ranks[z - 1] = solid_codes.pop() if solid_codes else 0
            continue
        if solid_codes:
            if len(solid_codes) > 1:
                return None
            symbol = solid_codes.pop()
            if not all((cells[c - 1] >> symbol) & 1 for c in column):
                return None
            ranks[z - 1] = symbol
            continue
        if table is None:
            table = SolidColumnTable(text)
        symbol = table.common_symbol(column)
        if symbol is None:
            return None
        ranks[z - 1] = symbol
    return tuple(ranks)


def test_cover(
    index: LcpIndex,
    positions: Sequence[int],
    table: Optional[SolidColumnTable] = None,
) -> Optional[str]:
    """
    TestCover(P): is there a cover of length m = n + 1 - max(P) with covering set P?

    Args:
        index: LCP index of T
        positions: candidate covering set P
        table: solid column table (built on demand for general i-strings)

    Returns:
        the lowest-rank witness, or None
    """
    ranks = _test_cover_ranks(index, positions, table)
    return index.text.alphabet.word(ranks) if ranks is not None else None


# Keep pytest from collecting the operation above as a test function
test_cover.__test__ = False


def covering_chains(
    occurrences: Sequence[int],
    target: int,
    length: int,
    max_size: int,
    guard: ResourceGuard,
) -> Iterator[Tuple[int, ...]]:
    """
    Ascending chains 1 = p_1 < ... < p_s = target drawn from `occurrences`
    with consecutive gaps ≤ length and s ≤ max_size
    """
    if not occurrences or occurrences[0] != 1:
        return
    if target == 1:
        guard.charge()
        yield (1,)
        return
    ordered = [p for p in occurrences if p <= target]
    stack: List[Tuple[int, Tuple[int, ...]]] = [(0, (1,))]
    while stack:
        at, chain = stack.pop()
        current = ordered[at]
        for nxt in range(len(ordered) - 1, at, -1):
            position = ordered[nxt]
            if position - current > length:
                continue
            if position == target:
                guard.charge()
                yield chain + (target,)
            elif len(chain) + 1 < max_size:
                stack.append((nxt, chain + (position,)))


def _window_occurrences(index: LcpIndex, ambiguous: Sequence[int], target: int, length: int) -> List[int]:
    lcp1 = index.prefix_lcps
    return [i for i in ambiguous if i <= target and lcp1[i - 1] >= length]


def fpt_solve_general(
    index: LcpIndex,
    max_subsets: int = MAX_SUBSETS,
    table_max_k: int = TABLE_MAX_K,
) -> CoverResult:
    """
    Exact shortest cover of an i-string

    The best ⊙-prefix cover is combined with TestCover over covering sets of at
    most 2k ambiguous positions, tried by largest element descending (length ascending).
    """
    text = index.text
    trivial = trivial_cover(text, "fpt")
    if trivial:
        return trivial
    n, k = text.n, text.k
    best = odot_candidate(index)
    ambiguous = ambiguous_positions(text)
    guard = ResourceGuard("max_subsets", max_subsets, hint="raise --max-subsets / ICOVER_MAX_SUBSETS")
    table = None
    if k and not text.is_partial_word:
        table = SolidColumnTable(text, table_max_k)
    lcp1 = index.prefix_lcps

    for target in reversed(ambiguous):
        m = n + 1 - target
        if best is not None and m > best.length:
            break
        if lcp1[target - 1] < m:
            continue
        occ = _window_occurrences(index, ambiguous, target, m)
        found = None
        for chain in covering_chains(occ, target, m, 2 * k, guard):
            ranks = _test_cover_ranks(index, chain, table)
            if ranks is not None:
                found = better(found, Candidate(m, ranks, chain))
        if found is not None:
            logger.debug(f"fpt: covering set search succeeded at length {m}")
            best = better(best, found)
            break

    logger.info(f"fpt: n={n}, k={k}, |A|={len(ambiguous)}, chains={guard.used}, length={best.length}")
    return to_cover_result(text, best, "fpt")


def _column_codes(text: IString, starts: np.ndarray, columns: Sequence[int]) -> np.ndarray:
    """codes[r, c] = rank of T[starts[r] + columns[c] - 1], -1 for a don't care"""
    offsets = np.asarray(columns, dtype=np.int64) - 1
    return text.solid_codes[(starts - 1)[:, None] + offsets[None, :]]


def _chain_covers(starts: np.ndarray, alive: np.ndarray, target: int, length: int) -> bool:
    hits = starts[alive]
    if hits.size == 0 or hits[0] != 1 or hits[-1] != target:
        return False
    return hits.size == 1 or int(np.diff(hits).max()) <= length


def _lowest_filling(
    codes: np.ndarray,
    starts: np.ndarray,
    forced: Sequence[int],
    options: Sequence[Sequence[int]],
    target: int,
    length: int,
    bound: Optional[Sequence[int]],
    guard: ResourceGuard,
) -> Optional[Tuple[List[int], np.ndarray]]:
    """
    Lowest filling of the don't-care columns of T[1..m] whose matching occurrences cover T.

    Columns with forced[c] ≥ 0 keep that rank; free columns try options[c] ascending.
    Matching only shrinks as columns are fixed, so a branch whose surviving occurrences
    no longer cover is cut. Fillings not below `bound` are cut as well.

    Returns:
        (filling, surviving-occurrence mask), or None
    """
    q = codes.shape[1]
    alive = np.ones(len(starts), dtype=bool)
    for c, r in enumerate(forced):
        if r >= 0:
            alive &= (codes[:, c] < 0) | (codes[:, c] == r)
    if not _chain_covers(starts, alive, target, length):
        return None
    free = [c for c in range(q) if forced[c] < 0]
    filling = list(forced)

    def forced_order(lo: int, hi: int) -> int:
        for c in range(lo, hi):
            if filling[c] != bound[c]:
                return -1 if filling[c] < bound[c] else 1
        return 0

    def visit(f: int, mask: np.ndarray, tight: bool) -> Optional[np.ndarray]:
        column = free[f] if f < len(free) else q
        if tight:
            order = forced_order(free[f - 1] + 1 if f else 0, column)
            if order > 0:
                return None
            tight = order == 0
        if f == len(free):
            return None if tight else mask
        guard.charge()
        values = codes[:, column]
        wildcard = values < 0
        for r in options[column]:
            if tight and r > bound[column]:
                break
            narrowed = mask & (wildcard | (values == r))
            if not _chain_covers(starts, narrowed, target, length):
                continue
            filling[column] = r
            found = visit(f + 1, narrowed, tight and r == bound[column])
            if found is not None:
                return found
        filling[column] = -1
        return None

    survivors = visit(0, alive, bound is not None)
    return (filling, survivors) if survivors is not None else None


def fpt_solve_partial(
    index: LcpIndex,
    max_subsets: int = MAX_SUBSETS,
    max_length: Optional[int] = None,
) -> Optional[CoverResult]:
    """
    Exact shortest cover of a partial word

    For each candidate length m = n + 1 - i (i ambiguous, i an occurrence of T[1..m]):
    occurrences with at most ⌊√k⌋ don't cares in U ⊙ j fix every other hole of U and
    the remaining ones are filled lowest-first from rank 0 and the symbols seen in that
    column (Case 1); covering sets avoiding them have at most ⌈2√k⌉ elements and go
    through TestCover (Case 2).

    Args:
        index: LCP index of T
        max_subsets: enumeration budget shared by both cases
        max_length: only look for covers up to this length; None when there is none

    Returns:
        CoverResult, or None when max_length rules every cover out
    """
    text = index.text
    if not text.is_partial_word:
        raise NotPartialWordError("the partial-word solver needs every non-solid cell to be the full alphabet")
    trivial = trivial_cover(text, "partial")
    if trivial:
        return trivial if max_length is None or trivial.length <= max_length else None
    n, k = text.n, text.k
    best = odot_candidate(index)
    ambiguous = ambiguous_positions(text)
    few = math.isqrt(k)
    case2_size = math.ceil(2 * math.sqrt(k))
    guard = ResourceGuard("max_subsets", max_subsets, hint="raise --max-subsets / ICOVER_MAX_SUBSETS")
    lcp1 = index.prefix_lcps
    prefix = [max(text.code(t), 0) for t in range(1, n + 1)]

    for target in reversed(ambiguous):
        m = n + 1 - target
        if (best is not None and m > best.length) or (max_length is not None and m > max_length):
            break
        if lcp1[target - 1] < m:
            continue
        occ = _window_occurrences(index, ambiguous, target, m)
        starts = np.asarray(occ, dtype=np.int64)
        columns = [z for z in text.nonsolid_positions if z <= m]
        codes = _column_codes(text, starts, columns)
        dont_cares = (codes < 0).sum(axis=1)
        options = [sorted({0, *np.unique(codes[:, c][codes[:, c] >= 0]).tolist()}) for c in range(len(columns))]
        few_rows = np.flatnonzero(dont_cares <= few)
        found = None
        bound: Optional[List[int]] = None

        # Case 1: some covering occurrence has few don't cares
        tried = set()
        for row in few_rows:
            forced = tuple(int(r) for r in codes[row])
            if forced in tried:
                continue
            tried.add(forced)
            filled = _lowest_filling(codes, starts, forced, options, target, m, bound, guard)
            if filled is None:
                continue
            filling, survivors = filled
            bound = filling
            word = list(prefix[:m])
            for z, r in zip(columns, filling):
                word[z - 1] = r
            found = better(found, Candidate(m, tuple(word), tuple(int(j) for j in starts[survivors])))

        # Case 2: every covering occurrence has many don't cares
        few_set = {occ[row] for row in few_rows}
        if 1 not in few_set and target not in few_set:
            rest = [j for j in occ if j not in few_set]
            for chain in covering_chains(rest, target, m, case2_size, guard):
                ranks = _test_cover_ranks(index, chain)
                if ranks is not None:
                    found = better(found, Candidate(m, ranks, chain))

        if found is not None:
            best = better(best, found)
            break

    logger.info(
        f"partial: n={n}, k={k}, |A|={len(ambiguous)}, enumerated={guard.used}, "
        f"length={best.length if best else None}"
    )
    if best is None or (max_length is not None and best.length > max_length):
        return None
    return to_cover_result(text, best, "partial")
