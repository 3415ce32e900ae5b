"""
LCP index over an i-string
Solid suffix structure on T_$ (every non-solid cell replaced by a distinct sentinel)
plus the intersection table; answers lcp(i, j) with O(k) solid queries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np

from utils.logger import get_logger
from .istring import IString, lowest_rank, popcount

logger = get_logger(__name__)


def suffix_array(codes: np.ndarray) -> np.ndarray:
    """
    Suffix array by prefix doubling (numpy lexsort on rank pairs)

    Args:
        codes: non-negative integer symbols

    Returns:
        0-based suffix starts in lexicographic order
    """
    n = len(codes)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    _, rank = np.unique(codes, return_inverse=True)
    rank = rank.astype(np.int64)
    step = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if step < n:
            second[: n - step] = rank[step:]
        order = np.lexsort((second, rank))
        r_sorted, s_sorted = rank[order], second[order]
        changed = (r_sorted[1:] != r_sorted[:-1]) | (s_sorted[1:] != s_sorted[:-1])
        fresh = np.concatenate(([0], np.cumsum(changed)))
        rank = np.empty(n, dtype=np.int64)
        rank[order] = fresh
        if fresh[-1] == n - 1:
            return order
        step *= 2


def height_array(codes: np.ndarray, sa: np.ndarray) -> np.ndarray:
    """Kasai: height[r] = lcp of suffixes sa[r-1] and sa[r] (height[0] = 0)"""
    n = len(codes)
    text = codes.tolist()
    order = sa.tolist()
    rank = [0] * n
    for r, start in enumerate(order):
        rank[start] = r
    height = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = order[r - 1]
        while i + h < n and j + h < n and text[i + h] == text[j + h]:
            h += 1
        height[r] = h
        if h:
            h -= 1
    return np.array(height, dtype=np.int64)


class SparseTable:
    """O(1) range-minimum over a fixed integer array, O(n log n) space"""

    def __init__(self, values: np.ndarray):
        self.levels: List[np.ndarray] = [np.asarray(values, dtype=np.int64)]
        width = 1
        while 2 * width <= len(values):
            prev = self.levels[-1]
            self.levels.append(np.minimum(prev[:-width], prev[width:]))
            width *= 2

    def query(self, lo: int, hi: int) -> int:
        """min(values[lo..hi]) inclusive, 0-based"""
        level = (hi - lo + 1).bit_length() - 1
        table = self.levels[level]
        return int(min(table[lo], table[hi - (1 << level) + 1]))

    def query_many(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        out = np.empty(len(lo), dtype=np.int64)
        level = np.frexp((hi - lo + 1).astype(np.float64))[1].astype(np.int64) - 1
        for lv in np.unique(level):
            sel = level == lv
            table = self.levels[int(lv)]
            out[sel] = np.minimum(table[lo[sel]], table[hi[sel] - (1 << int(lv)) + 1])
        return out


class LcpIndex:
    """
    lcp between suffixes of an i-string.

    The solidified text T_$ maps rank r to r and the t-th non-solid cell to σ + t, so
    every sentinel is unique and lcp on T_$ never extends past a non-solid cell.
    """

    def __init__(self, text: IString):
        self.text = text
        self.n = text.n
        codes = text.solid_codes.copy()
        nonsolid = np.array(text.nonsolid_positions, dtype=np.int64) - 1
        codes[nonsolid] = text.sigma + np.arange(len(nonsolid), dtype=np.int64)
        self.solidified = codes
        self.sa = suffix_array(codes)
        self.rank = np.empty(self.n, dtype=np.int64)
        self.rank[self.sa] = np.arange(self.n, dtype=np.int64)
        self.rmq = SparseTable(height_array(codes, self.sa))
        # position (0-based) -> index into Z, -1 for solid cells
        self.z_index = np.full(self.n, -1, dtype=np.int64)
        self.z_index[nonsolid] = np.arange(len(nonsolid), dtype=np.int64)
        logger.debug(f"LCP index built: n={self.n}, k={text.k}, sigma={text.sigma}")

    @property
    def xtable(self):
        return self.text.xtable

    # --- scalar queries ----------------------------------------------------

    def solid_lcp(self, i: int, j: int) -> int:
        """lcp on T_$ for 1-based suffixes i, j"""
        if i == j:
            return self.n - i + 1
        ri, rj = self.rank[i - 1], self.rank[j - 1]
        if ri > rj:
            ri, rj = rj, ri
        return self.rmq.query(int(ri) + 1, int(rj))

    def lcp(self, i: int, j: int) -> int:
        """Largest ℓ with T[i..i+ℓ-1] ≈ T[j..j+ℓ-1]"""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"suffix {i} or {j} out of range 1..{self.n}")
        if i == j:
            return self.n - i + 1
        text = self.text
        length = 0
        while i <= self.n and j <= self.n and text.symbols_match(i, j):
            step = max(1, self.solid_lcp(i, j))
            i += step
            j += step
            length += step
        return length

    # --- vectorized queries ------------------------------------------------

    def _match_many(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """symbols_match for 0-based position arrays"""
        codes = self.text.solid_codes
        ca, cb = codes[a], codes[b]
        solid_a, solid_b = ca >= 0, cb >= 0
        result = np.zeros(len(a), dtype=bool)
        both = solid_a & solid_b
        result[both] = ca[both] == cb[both]
        membership = self.text.membership
        only_a = solid_a & ~solid_b
        result[only_a] = membership[b[only_a], ca[only_a]]
        only_b = solid_b & ~solid_a
        result[only_b] = membership[a[only_b], cb[only_b]]
        neither = ~solid_a & ~solid_b
        if neither.any():
            if self.text.is_partial_word:
                result[neither] = True
            else:
                result[neither] = self.xtable.nonempty[self.z_index[a[neither]], self.z_index[b[neither]]]
        return result

    def lcp_many(self, i: int, others: np.ndarray) -> np.ndarray:
        """lcp(i, j) for every 1-based j in `others`, same stepping loop run in lockstep"""
        others = np.asarray(others, dtype=np.int64)
        out = np.zeros(len(others), dtype=np.int64)
        a = np.full(len(others), i - 1, dtype=np.int64)
        b = others - 1
        same = b == a
        out[same] = self.n - i + 1
        active = np.flatnonzero(~same)
        while active.size:
            pa, pb = a[active], b[active]
            inside = (pa < self.n) & (pb < self.n)
            active, pa, pb = active[inside], pa[inside], pb[inside]
            if not active.size:
                break
            ok = self._match_many(pa, pb)
            active, pa, pb = active[ok], pa[ok], pb[ok]
            if not active.size:
                break
            ra, rb = self.rank[pa], self.rank[pb]
            lo, hi = np.minimum(ra, rb) + 1, np.maximum(ra, rb)
            step = np.maximum(1, self.rmq.query_many(lo, hi))
            a[active] += step
            b[active] += step
            out[active] += step
        return out

    @cached_property
    def prefix_lcps(self) -> np.ndarray:
        """lcp(1, i) for i = 1..n as a 0-based array"""
        return self.lcp_many(1, np.arange(1, self.n + 1, dtype=np.int64))

    def occurrences_of_prefix(self, m: int) -> np.ndarray:
        """Occ(T[1..m], T) as 1-based positions"""
        if m <= 0 or m > self.n:
            return np.zeros(0, dtype=np.int64)
        return np.flatnonzero(self.prefix_lcps >= m) + 1


def build_index(text: IString) -> LcpIndex:
    return LcpIndex(text)


def lcp(index: LcpIndex, i: int, j: int) -> int:
    return index.lcp(i, j)


def occurrences(pattern: IString, text: IString) -> List[int]:
    """
    Occ(S, T) ascending: every j with S ≈ T[j..j+|S|-1]

    Indexes S·$·T with a fresh separator and reads lcp(1, ·) over the T part.
    """
    m = len(pattern)
    if m == 0:
        raise ValueError("empty pattern")
    if m > len(text):
        return []
    joint, offset = pattern.concat(text)
    index = LcpIndex(joint)
    starts = np.arange(offset, offset + len(text) - m + 1, dtype=np.int64)
    hits = index.lcp_many(1, starts) >= m
    return (starts[hits] - offset + 1).tolist()


@dataclass
class OccurrenceClassification:
    """
    Occurrences of U = T[1..b] split into solid (E) and non-solid (H) ones,
    E partitioned by the solid string U ⊙ j.
    """
    b: int
    e: int
    solid: List[int] = field(default_factory=list)
    nonsolid: List[int] = field(default_factory=list)
    # key: ranks of U ⊙ j at the non-solid positions of U
    classes: Dict[Tuple[int, ...], List[int]] = field(default_factory=dict)
    # key -> (representative r, ℓ_r)
    representatives: Dict[Tuple[int, ...], Tuple[int, int]] = field(default_factory=dict)

    @property
    def E(self) -> List[int]:
        return self.solid

    @property
    def H(self) -> List[int]:
        return self.nonsolid

    def class_of(self, j: int) -> Optional[Tuple[int, ...]]:
        for key, members in self.classes.items():
            if j in members:
                return key
        return None


def classify_prefix_occurrences(index: LcpIndex, b: int, e: int) -> OccurrenceClassification:
    """
    Classify Occ(T[1..b], T) for the ⊙-prefix interval [b, e]

    Args:
        index: LCP index of T
        b: length of U = T[1..b]
        e: upper end of the interval; T[b+1..e] must be solid

    Returns:
        OccurrenceClassification with representatives maximizing min(lcp(1, j), e)
    """
    text = index.text
    n = text.n
    if not (1 <= b <= e <= n):
        raise ValueError(f"interval [{b}, {e}] outside 1..{n}")
    if any(b < z <= e for z in text.nonsolid_positions):
        raise ValueError(f"T[{b + 1}..{e}] is not solid")

    lcp1 = index.prefix_lcps
    prefix_z = [z for z in text.nonsolid_positions if z <= b]
    cells = text.cells
    result = OccurrenceClassification(b=b, e=e)

    for j in index.occurrences_of_prefix(b).tolist():
        key: List[int] = []
        solid = True
        for z in prefix_z:
            meet = cells[z - 1] & cells[j + z - 2]
            if popcount(meet) != 1:
                solid = False
                break
            key.append(lowest_rank(meet))
        if not solid:
            result.nonsolid.append(j)
            continue
        result.solid.append(j)
        class_key = tuple(key)
        result.classes.setdefault(class_key, []).append(j)
        reach = min(int(lcp1[j - 1]), e)
        best = result.representatives.get(class_key)
        if best is None or reach > best[1]:
            result.representatives[class_key] = (j, reach)

    logger.debug(
        f"classified U=T[1..{b}] (e={e}): |E|={len(result.solid)}, |H|={len(result.nonsolid)}, "
        f"classes={len(result.classes)}"
    )
    return result
