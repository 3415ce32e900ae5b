"""
Cover engine
maxgap lists, the restricted shortest-cover subroutine (single and batched),
long covers, the simple prefix-enumeration solver and the ⊙-prefix solver.
"""

from __future__ import annotations

import bisect
import itertools
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from config import MAX_PREFIXES
from models.cover_models import CoverResult
from utils.logger import get_logger
from .istring import IString, lowest_rank, mask_members, popcount
from .lcp_index import LcpIndex, build_index, classify_prefix_occurrences
from .resources import ResourceGuard

logger = get_logger(__name__)


class GapList:
    """
    Ascending doubly linked position list ending with a fixed sentinel.

    maxgap is kept in O(1) per deletion: removing x merges its two gaps,
    so the maximum can only grow.
    """

    def __init__(self, positions: Iterable[int], end: int):
        items = list(positions) + [end]
        if any(b <= a for a, b in zip(items, items[1:])):
            raise ValueError("positions must be strictly ascending and below the sentinel")
        self.end = end
        self.head: Optional[int] = items[0] if len(items) > 1 else None
        self.prev: Dict[int, Optional[int]] = {}
        self.next: Dict[int, int] = {}
        for index, position in enumerate(items):
            self.prev[position] = items[index - 1] if index else None
            if position != end:
                self.next[position] = items[index + 1]
        self.maxgap = max((b - a for a, b in zip(items, items[1:])), default=0)

    def __contains__(self, position: int) -> bool:
        return position in self.next

    def __len__(self) -> int:
        return len(self.next)

    def delete(self, position: int) -> None:
        before = self.prev.pop(position)
        after = self.next.pop(position)
        self.prev[after] = before
        if before is None:
            self.head = after if after != self.end else None
        else:
            self.next[before] = after
            self.maxgap = max(self.maxgap, after - before)

    def items(self) -> List[int]:
        out = []
        cursor = self.head
        while cursor is not None and cursor != self.end:
            out.append(cursor)
            cursor = self.next[cursor]
        return out


def maxgap(positions: Sequence[int]) -> int:
    """max{ i_{t+1} - i_t } over an ascending list with at least two elements"""
    if len(positions) < 2:
        raise ValueError("maxgap needs at least two positions")
    return max(b - a for a, b in zip(positions, positions[1:]))


def minimize_covering_set(positions: Sequence[int], length: int, n: int) -> List[int]:
    """
    Greedy left-to-right minimization: repeatedly keep the farthest occurrence that
    still touches the covered prefix. Every position of the result is covered at most twice.
    """
    ordered = sorted(positions)
    if not ordered or ordered[0] != 1:
        raise ValueError("a covering set must contain position 1")
    chosen = [1]
    covered = length
    while covered < n:
        at = bisect.bisect_right(ordered, covered + 1) - 1
        if ordered[at] <= chosen[-1]:
            raise ValueError(f"positions do not cover T with length {length}")
        chosen.append(ordered[at])
        covered = ordered[at] + length - 1
    return chosen


class Candidate(NamedTuple):
    length: int
    ranks: Tuple[int, ...]
    positions: Tuple[int, ...]

    def key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.length, self.ranks)


def better(current: Optional[Candidate], other: Optional[Candidate]) -> Optional[Candidate]:
    """Shorter first, then lexicographically smaller witness"""
    if other is None:
        return current
    if current is None or other.key() < current.key():
        return other
    return current


def to_cover_result(text: IString, candidate: Candidate, algorithm: str) -> CoverResult:
    return CoverResult(
        length=candidate.length,
        witness=text.alphabet.word(candidate.ranks),
        covering_set=minimize_covering_set(candidate.positions, candidate.length, text.n),
        algorithm=algorithm,
    )


# --- distances ---------------------------------------------------------------

def prefix_distances(index: LcpIndex, fill: Dict[int, int], length: int, positions: np.ndarray) -> np.ndarray:
    """
    dist[i] = lcp(S, T[i..n]) for a solid S ≈ T[1..length]

    S agrees with T on solid cells, so dist is lcp(1, i) capped at |S| and then cut
    at the first non-solid cell z of the prefix where S[z] ∉ T[i+z-1].

    Args:
        fill: rank of S at every non-solid position z ≤ length
        positions: 1-based start positions
    """
    positions = np.asarray(positions, dtype=np.int64)
    dist = np.minimum(index.prefix_lcps[positions - 1], length)
    membership = index.text.membership
    for z in sorted(fill):
        if z > length:
            break
        alive = np.flatnonzero(dist >= z)
        if not alive.size:
            break
        ok = membership[positions[alive] + z - 2, fill[z]]
        dist[alive[~ok]] = z - 1
    return dist


def odot_fill(text: IString, length: int, anchor: int) -> Dict[int, int]:
    """Ranks of T[1..length] ⊙ anchor at the non-solid cells; ValueError if not solid there"""
    fill = {}
    for z in text.nonsolid_positions:
        if z > length:
            break
        meet = text.cells[z - 1] & text.cells[anchor + z - 2]
        if popcount(meet) != 1:
            raise ValueError(f"T[1..{length}] ⊙ {anchor} is not solid at {z}")
        fill[z] = lowest_rank(meet)
    return fill


def fill_to_ranks(text: IString, fill: Dict[int, int], length: int) -> Tuple[int, ...]:
    return tuple(fill[t] if t in fill else text.code(t) for t in range(1, length + 1))


# --- restricted shortest cover ------------------------------------------------

class RestrictedCover(NamedTuple):
    length: int
    survivors: List[int]


def _deletion_loop(
    positions: Sequence[int],
    dist: Sequence[int],
    length: int,
    n: int,
    buckets: List[List[int]],
) -> Optional[RestrictedCover]:
    if not positions or positions[0] != 1:
        return None
    gaps = GapList(positions, n + 1)
    used = set()
    for position, value in zip(positions, dist):
        buckets[value].append(position)
        used.add(value)
    try:
        for j in range(1, length + 1):
            for position in buckets[j - 1]:
                gaps.delete(position)
            if 1 not in gaps:
                return None
            if gaps.maxgap <= j:
                return RestrictedCover(j, gaps.items())
        return None
    finally:
        for value in used:
            buckets[value].clear()


def find_restricted_cover(
    index: LcpIndex,
    prefix_ranks: Sequence[int],
    positions: Sequence[int],
) -> Optional[RestrictedCover]:
    """
    ShortestCover(S, L) with the surviving list at return time

    Args:
        index: LCP index of T
        prefix_ranks: solid S ≈ T[1..|S|] as alphabet ranks
        positions: ascending sublist L of 1..n

    Returns:
        shortest j such that maxgap over {i ∈ L : lcp(S, T[i..n]) ≥ j} ∪ {n+1} is ≤ j
        and 1 survives, or None
    """
    text = index.text
    length = len(prefix_ranks)
    if length == 0 or length > text.n:
        raise ValueError(f"prefix length {length} outside 1..{text.n}")
    for t, r in enumerate(prefix_ranks, start=1):
        if not (text.cells[t - 1] >> r) & 1:
            raise ValueError(f"S does not match T[1..{length}] at {t}")
    ordered = sorted(set(positions))
    if not ordered:
        return None
    fill = {z: prefix_ranks[z - 1] for z in text.nonsolid_positions if z <= length}
    dist = prefix_distances(index, fill, length, np.array(ordered, dtype=np.int64))
    buckets: List[List[int]] = [[] for _ in range(length + 1)]
    return _deletion_loop(ordered, dist.tolist(), length, text.n, buckets)


def shortest_cover_restricted(
    index: LcpIndex,
    prefix_ranks: Sequence[int],
    positions: Sequence[int],
) -> Optional[int]:
    found = find_restricted_cover(index, prefix_ranks, positions)
    return found.length if found else None


class BatchInstance(NamedTuple):
    """⊙-prefix T[1..length] ⊙ anchor, never materialized, with its candidate list"""
    length: int
    anchor: int
    positions: Tuple[int, ...]


def _run_batch(index: LcpIndex, instances: Sequence[BatchInstance]) -> List[Optional[RestrictedCover]]:
    text = index.text
    n, k = text.n, text.k
    if len(instances) > n:
        raise ValueError(f"batch of {len(instances)} instances exceeds n={n}")
    total = sum(len(inst.positions) for inst in instances)
    if total > n * (1 + k * k):
        raise ValueError(f"batch lists hold {total} positions, more than n(1+k^2)={n * (1 + k * k)}")
    buckets: List[List[int]] = [[] for _ in range(n + 1)]
    results: List[Optional[RestrictedCover]] = []
    for inst in instances:
        ordered = sorted(set(inst.positions))
        if not ordered:
            results.append(None)
            continue
        fill = odot_fill(text, inst.length, inst.anchor)
        dist = prefix_distances(index, fill, inst.length, np.array(ordered, dtype=np.int64))
        results.append(_deletion_loop(ordered, dist.tolist(), inst.length, n, buckets))
    return results


def shortest_cover_batch(index: LcpIndex, instances: Sequence[BatchInstance]) -> List[Optional[int]]:
    """ShortestCover(S, L) for a collection of ⊙-prefix instances with one shared bucket array"""
    return [found.length if found else None for found in _run_batch(index, instances)]


# --- long covers -------------------------------------------------------------

def _long_cover(index: LcpIndex) -> Optional[Candidate]:
    text = index.text
    n = text.n
    lcp1 = index.prefix_lcps
    for m in range((n + 1) // 2, n + 1):
        start = n - m + 1
        if lcp1[start - 1] >= m:
            ranks = tuple(
                lowest_rank(text.cells[t] & text.cells[start - 1 + t]) for t in range(m)
            )
            positions = (1,) if start == 1 else (1, start)
            return Candidate(m, ranks, positions)
    return None


def long_cover_search(index: LcpIndex) -> Optional[CoverResult]:
    """Smallest m ≥ ⌈n/2⌉ with lcp(1, n-m+1) = m, witness from the lowest-rank intersections"""
    found = _long_cover(index)
    return to_cover_result(index.text, found, "long") if found else None


# --- simple algorithm --------------------------------------------------------

def _cover_from_distances(dist: np.ndarray, length: int, n: int) -> Optional[Tuple[int, np.ndarray]]:
    """
    Same answer as the deletion loop on a full distance array: a failing j with
    maxgap g > j rules out every j' < g, so j jumps straight to g.
    """
    j = 1
    while j <= length and dist[0] >= j:
        survivors = np.flatnonzero(dist >= j) + 1
        gap = int(np.diff(np.append(survivors, n + 1)).max())
        if gap <= j:
            return j, survivors
        j = gap
    return None


def trivial_cover(text: IString, algorithm: str) -> Optional[CoverResult]:
    if text.sigma == 1:
        return CoverResult(length=1, witness=text.alphabet.symbols[0],
                           covering_set=list(range(1, text.n + 1)), algorithm=algorithm)
    if text.n == 1:
        return CoverResult(length=1, witness=text.alphabet.symbols[lowest_rank(text.cells[0])],
                           covering_set=[1], algorithm=algorithm)
    return None


def simple_solve(text: IString, max_prefixes: int = MAX_PREFIXES) -> CoverResult:
    """
    Exact shortest cover by enumerating every solid prefix of length ⌊n/2⌋

    Args:
        text: input i-string
        max_prefixes: refuse when more solid prefixes than this would be enumerated

    Returns:
        CoverResult (lexicographically smallest witness among shortest covers)
    """
    trivial = trivial_cover(text, "simple")
    if trivial:
        return trivial

    n = text.n
    half = n // 2
    left = sum(1 for z in text.nonsolid_positions if z <= half)
    right = sum(1 for z in text.nonsolid_positions if z > n - half)
    flipped = left > right
    oriented = text.reverse() if flipped else text

    guard = ResourceGuard(
        "max_prefixes", max_prefixes,
        hint="raise --max-prefixes / ICOVER_MAX_PREFIXES or use --algo fpt",
    )
    guard.require(oriented.completion_count(1, half))

    index = build_index(oriented)
    logger.info(f"simple: n={n}, k={text.k}, half={half}, reversed={flipped}")

    def restore(candidate: Candidate) -> Candidate:
        if not flipped:
            return candidate
        m = candidate.length
        return Candidate(m, candidate.ranks[::-1], tuple(sorted(n - i - m + 2 for i in candidate.positions)))

    best = None
    long_cover = _long_cover(index)
    if long_cover:
        best = restore(long_cover)

    prefix_z = [z for z in oriented.nonsolid_positions if z <= half]
    everything = np.arange(1, n + 1, dtype=np.int64)
    choices = [mask_members(oriented.cells[z - 1]) for z in prefix_z]
    for picked in itertools.product(*choices):
        fill = dict(zip(prefix_z, picked))
        dist = prefix_distances(index, fill, half, everything)
        found = _cover_from_distances(dist, half, n)
        if found is None:
            continue
        m, survivors = found
        if best is not None and m > best.length:
            continue
        ranks = fill_to_ranks(oriented, fill, m)
        best = better(best, restore(Candidate(m, ranks, tuple(survivors.tolist()))))

    return to_cover_result(text, best, "simple")


# --- ⊙-prefix solver -----------------------------------------------------------

def odot_intervals(n: int, nonsolid: Sequence[int]) -> List[Tuple[int, int]]:
    """
    Intervals [b, e] of prefix lengths with a constant number of non-solid cells:
    U = T[1..b] ends at a non-solid cell (or b = 1 before the first one) and T[b+1..e] is solid.
    """
    if not nonsolid:
        return [(1, n)]
    intervals = []
    if nonsolid[0] > 1:
        intervals.append((1, nonsolid[0] - 1))
    for c, z in enumerate(nonsolid):
        e = nonsolid[c + 1] - 1 if c + 1 < len(nonsolid) else n
        intervals.append((z, e))
    return intervals


def odot_candidate(index: LcpIndex) -> Optional[Candidate]:
    text = index.text
    best = _long_cover(index)
    for b, e in odot_intervals(text.n, text.nonsolid_positions):
        if best is not None and b > best.length:
            break
        classes = classify_prefix_occurrences(index, b, e)
        instances = []
        for key, (anchor, reach) in classes.representatives.items():
            members = set(classes.classes[key]) | set(classes.nonsolid)
            instances.append(BatchInstance(reach, anchor, tuple(sorted(members))))
        for inst, found in zip(instances, _run_batch(index, instances)):
            if found is None:
                continue
            fill = odot_fill(text, found.length, inst.anchor)
            ranks = fill_to_ranks(text, fill, found.length)
            best = better(best, Candidate(found.length, ranks, tuple(found.survivors)))
        if logger.is_debug():
            logger.debug(f"odot interval [{b}, {e}]: {len(instances)} classes, best={best.length if best else None}")
    return best


def odot_prefix_solve(index: LcpIndex) -> Optional[CoverResult]:
    """Shortest cover among all solid strings T[1..m] ⊙ i (long covers included)"""
    trivial = trivial_cover(index.text, "odot")
    if trivial:
        return trivial
    found = odot_candidate(index)
    return to_cover_result(index.text, found, "odot") if found else None


# --- classical covers of solid strings ----------------------------------------

def border_array(word: Sequence) -> List[int]:
    """KMP failure function: border[i] = longest proper border of word[0..i]"""
    border = [0] * len(word)
    for i in range(1, len(word)):
        b = border[i - 1]
        while b and word[i] != word[b]:
            b = border[b - 1]
        if word[i] == word[b]:
            b += 1
        border[i] = b
    return border


def z_array(word: Sequence) -> List[int]:
    n = len(word)
    z = [0] * n
    if n:
        z[0] = n
    left = right = 0
    for i in range(1, n):
        if i < right:
            z[i] = min(right - i, z[i - left])
        while i + z[i] < n and word[z[i]] == word[i + z[i]]:
            z[i] += 1
        if i + z[i] > right:
            left, right = i, i + z[i]
    return z


def classical_shortest_cover(word: Sequence) -> int:
    """
    Shortest cover of a solid string: some border (or the word itself), tried by
    increasing length with occurrences read off the Z-array.
    """
    n = len(word)
    if n == 0:
        raise ValueError("empty word")
    border = border_array(word)
    lengths = []
    b = n
    while b:
        lengths.append(b)
        b = border[b - 1]
    z = np.array(z_array(word), dtype=np.int64)
    for m in sorted(lengths):
        occ = np.flatnonzero(z >= m) + 1
        if int(np.diff(np.append(occ, n + 1)).max()) <= m:
            return m
    return n
