"""
Indeterminate strings (i-strings) and partial words
Alphabet ranks, bit-vector symbol sets, the match relation and the ⊙ restriction.

Positions are 1-based in every public method; cells are stored 0-based internally.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import MAX_ALPHABET
from .errors import IStringParseError

DONT_CARE = "?"
RESERVED = frozenset("[]?#")
ALPHABET_HEADER = "#alphabet="


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct one-character symbols; rank is the index in `symbols`"""
    symbols: Tuple[str, ...]
    _ranks: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if not self.symbols:
            raise IStringParseError("alphabet must contain at least one symbol")
        for symbol in self.symbols:
            if len(symbol) != 1:
                raise IStringParseError(f"alphabet symbols must be single characters, got {symbol!r}")
            if symbol in RESERVED or symbol.isspace():
                raise IStringParseError(f"symbol {symbol!r} is reserved by the i-string grammar")
        if len(set(self.symbols)) != len(self.symbols):
            raise IStringParseError("alphabet symbols must be distinct")
        object.__setattr__(self, "_ranks", {s: r for r, s in enumerate(self.symbols)})

    @classmethod
    def of(cls, symbols: str | Sequence[str]) -> "Alphabet":
        return cls(tuple(symbols))

    @property
    def size(self) -> int:
        return len(self.symbols)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.symbols)) - 1

    def rank(self, symbol: str) -> int:
        try:
            return self._ranks[symbol]
        except KeyError:
            raise IStringParseError(f"character {symbol!r} is outside the alphabet {''.join(self.symbols)!r}") from None

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._ranks

    def word(self, ranks: Sequence[int]) -> str:
        """Solid string from a rank sequence"""
        return "".join(self.symbols[r] for r in ranks)

    def ranks(self, word: str) -> Tuple[int, ...]:
        return tuple(self.rank(c) for c in word)

    def with_separator(self) -> Tuple["Alphabet", int]:
        """Alphabet extended by one fresh symbol (rank = old size) that matches nothing else"""
        for code in itertools.chain(range(33, 127), range(161, 0x3000)):
            candidate = chr(code)
            if candidate not in self._ranks and candidate not in RESERVED and not candidate.isspace():
                return Alphabet(self.symbols + (candidate,)), len(self.symbols)
        raise IStringParseError("no free separator symbol")


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest_rank(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def mask_members(mask: int) -> List[int]:
    """Ranks of the set bits, ascending"""
    members = []
    rank = 0
    while mask:
        if mask & 1:
            members.append(rank)
        mask >>= 1
        rank += 1
    return members


class IntersectionTable:
    """
    Pairwise intersections of the non-solid cells.

    label[a, b] is an interned id of T[z_a] ∩ T[z_b] (equal ids ⇔ equal sets) and
    nonempty[a, b] tells whether that intersection is nonempty; a, b index the
    sorted non-solid positions.
    """

    def __init__(self, text: "IString"):
        zs = text.nonsolid_positions
        k = len(zs)
        self.index_of: Dict[int, int] = {z: a for a, z in enumerate(zs)}
        self.label = np.zeros((k, k), dtype=np.int32)
        self.nonempty = np.zeros((k, k), dtype=bool)
        interned: Dict[int, int] = {}
        cells = text.cells
        for a in range(k):
            left = cells[zs[a] - 1]
            for b in range(a, k):
                meet = left & cells[zs[b] - 1]
                ident = interned.setdefault(meet, len(interned))
                self.label[a, b] = self.label[b, a] = ident
                self.nonempty[a, b] = self.nonempty[b, a] = meet != 0
        self.distinct_sets = len(interned)

    def match(self, i: int, j: int) -> bool:
        return bool(self.nonempty[self.index_of[i], self.index_of[j]])

    def same_intersection(self, i: int, j: int, i2: int, j2: int) -> bool:
        return self.label[self.index_of[i], self.index_of[j]] == self.label[self.index_of[i2], self.index_of[j2]]


class IString:
    """
    Immutable indeterminate string: a sequence of nonempty symbol sets (bit vectors).

    A cell is solid when exactly one bit is set; the string is a partial word when
    every non-solid cell is the full alphabet.
    """

    def __init__(self, alphabet: Alphabet, cells: Sequence[int]):
        full = alphabet.full_mask
        for position, cell in enumerate(cells, start=1):
            if cell <= 0 or cell & ~full:
                raise IStringParseError(f"cell {position} is empty or outside the alphabet")
        self.alphabet = alphabet
        self.cells: Tuple[int, ...] = tuple(cells)
        self.nonsolid_positions: Tuple[int, ...] = tuple(
            i for i, cell in enumerate(self.cells, start=1) if cell & (cell - 1)
        )
        self._solid = [not (cell & (cell - 1)) for cell in self.cells]

    # --- basic shape -------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.cells)

    @property
    def k(self) -> int:
        return len(self.nonsolid_positions)

    @property
    def sigma(self) -> int:
        return self.alphabet.size

    def __len__(self) -> int:
        return len(self.cells)

    @cached_property
    def is_partial_word(self) -> bool:
        full = self.alphabet.full_mask
        return all(self.cells[z - 1] == full for z in self.nonsolid_positions)

    def is_solid(self, i: int) -> bool:
        return self._solid[i - 1]

    def cell(self, i: int) -> int:
        self._check_position(i)
        return self.cells[i - 1]

    def members(self, i: int) -> List[int]:
        return mask_members(self.cell(i))

    def code(self, i: int) -> int:
        """Rank of a solid cell, -1 for a non-solid one"""
        cell = self.cells[i - 1]
        return lowest_rank(cell) if self._solid[i - 1] else -1

    @cached_property
    def solid_codes(self) -> np.ndarray:
        return np.array([self.code(i) for i in range(1, self.n + 1)], dtype=np.int64)

    @cached_property
    def membership(self) -> np.ndarray:
        """n × σ boolean matrix, membership[i-1, r] ⇔ rank r ∈ T[i]"""
        matrix = np.zeros((self.n, self.sigma), dtype=bool)
        for row, cell in enumerate(self.cells):
            for r in mask_members(cell):
                matrix[row, r] = True
        return matrix

    @cached_property
    def xtable(self) -> IntersectionTable:
        return IntersectionTable(self)

    def _check_position(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise IndexError(f"position {i} out of range 1..{self.n}")

    # --- matching ----------------------------------------------------------

    def symbols_match(self, i: int, j: int) -> bool:
        """T[i] ∩ T[j] ≠ ∅ in O(1): equality, bit test, or the intersection table"""
        self._check_position(i)
        self._check_position(j)
        a, b = self.cells[i - 1], self.cells[j - 1]
        solid_a, solid_b = self._solid[i - 1], self._solid[j - 1]
        if solid_a and solid_b:
            return a == b
        if solid_a or solid_b:
            return (a & b) != 0
        if self.is_partial_word:
            return True
        return self.xtable.match(i, j)

    def match_factors(self, i: int, j: int, length: int) -> bool:
        """T[i..i+length-1] ≈ T[j..j+length-1]"""
        if length < 0:
            raise ValueError("negative factor length")
        if length == 0:
            return True
        if i < 1 or j < 1 or i + length - 1 > self.n or j + length - 1 > self.n:
            raise IndexError(f"factor of length {length} at {i} or {j} overflows 1..{self.n}")
        return all(self.symbols_match(i + t, j + t) for t in range(length))

    def matches_word(self, ranks: Sequence[int], start: int) -> bool:
        """Solid word (ranks) occurs at `start`"""
        if start < 1 or start + len(ranks) - 1 > self.n:
            return False
        cells = self.cells
        return all((cells[start - 1 + t] >> r) & 1 for t, r in enumerate(ranks))

    # --- derived strings ---------------------------------------------------

    def odot(self, m: int, i: int, pattern: Optional["IString"] = None) -> "IString":
        """
        U ⊙ i: positionwise intersection of U (default T[1..m]) with T[i..i+m-1].
        Raises ValueError when i is not an occurrence of U.
        """
        if m < 0 or i < 1 or i + m - 1 > self.n:
            raise IndexError(f"window of length {m} at {i} overflows 1..{self.n}")
        source = pattern.cells if pattern is not None else self.cells
        if len(source) < m:
            raise ValueError(f"pattern shorter than {m}")
        meet = [source[t] & self.cells[i - 1 + t] for t in range(m)]
        if any(cell == 0 for cell in meet):
            raise ValueError(f"position {i} is not an occurrence of the length-{m} pattern")
        return IString(self.alphabet, meet)

    def reverse(self) -> "IString":
        return IString(self.alphabet, self.cells[::-1])

    def factor(self, i: int, j: int) -> "IString":
        """T[i..j] (inclusive, 1-based)"""
        return IString(self.alphabet, self.cells[i - 1:j])

    def concat(self, other: "IString") -> Tuple["IString", int]:
        """
        self · $ · other over the alphabet extended by a fresh separator $.
        Returns the joint string and the 1-based offset at which `other` starts.
        """
        if other.alphabet != self.alphabet:
            raise ValueError("pattern and text must share the alphabet")
        extended, sep_rank = self.alphabet.with_separator()
        joint = IString(extended, self.cells + (1 << sep_rank,) + other.cells)
        return joint, self.n + 2

    def completions(self, i: int = 1, j: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
        """Every solid string matching T[i..j], in lexicographic (rank) order"""
        j = self.n if j is None else j
        choices = [mask_members(cell) for cell in self.cells[i - 1:j]]
        return itertools.product(*choices)

    def completion_count(self, i: int = 1, j: Optional[int] = None) -> int:
        j = self.n if j is None else j
        count = 1
        for z in self.nonsolid_positions:
            if i <= z <= j:
                count *= popcount(self.cells[z - 1])
        return count

    def lowest_completion(self) -> Tuple[int, ...]:
        return tuple(lowest_rank(cell) for cell in self.cells)

    def solid_word(self) -> Optional[str]:
        if self.k:
            return None
        return self.alphabet.word(self.lowest_completion())

    # --- identity ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IString):
            return NotImplemented
        return self.alphabet == other.alphabet and self.cells == other.cells

    def __hash__(self) -> int:
        return hash((self.alphabet.symbols, self.cells))

    def __str__(self) -> str:
        return format_istring(self, header=False)

    def __repr__(self) -> str:
        return f"IString({format_istring(self, header=False)!r}, n={self.n}, k={self.k}, sigma={self.sigma})"


def _split_header(text: str) -> Tuple[Optional[str], str]:
    lines = text.splitlines()
    for index, line in enumerate(lines):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith(ALPHABET_HEADER):
            return stripped[len(ALPHABET_HEADER):].strip(), "\n".join(lines[index + 1:])
        break
    return None, text


def _tokenize(body: str) -> List[Optional[str]]:
    """Tokens: one char (solid), a bracket body string, or None for `?`"""
    tokens: List[Optional[str]] = []
    chars = [c for c in body if not c.isspace()]
    pos = 0
    while pos < len(chars):
        c = chars[pos]
        if c == "[":
            end = pos + 1
            while end < len(chars) and chars[end] != "]":
                if chars[end] in RESERVED:
                    raise IStringParseError(f"unexpected {chars[end]!r} inside a bracket set")
                end += 1
            if end == len(chars):
                raise IStringParseError("unclosed bracket set")
            if end == pos + 1:
                raise IStringParseError("empty bracket set []")
            tokens.append("".join(chars[pos + 1:end]))
            pos = end + 1
        elif c == DONT_CARE:
            tokens.append(None)
            pos += 1
        elif c in RESERVED:
            raise IStringParseError(f"unexpected {c!r}")
        else:
            tokens.append(c)
            pos += 1
    return tokens


def parse_istring(
    text: str,
    alphabet: Optional[Alphabet | str] = None,
    max_alphabet: int = MAX_ALPHABET,
) -> IString:
    """
    Parse the i-string text grammar.

    Args:
        text: plain chars (solid), `[abc]` sets, `?` for the full alphabet; an optional
            first line `#alphabet=abc` declares the alphabet; whitespace is ignored
        alphabet: declared alphabet; inferred in first-appearance order when omitted
        max_alphabet: widest accepted symbol-set bit vector

    Returns:
        IString
    """
    header, body = _split_header(text)
    tokens = _tokenize(body)
    if not tokens:
        raise IStringParseError("empty i-string")

    if isinstance(alphabet, str):
        alphabet = Alphabet.of(alphabet)
    if alphabet is None and header is not None:
        alphabet = Alphabet.of(header)
    if alphabet is None:
        seen: Dict[str, None] = {}
        for token in tokens:
            if token is not None:
                for c in token:
                    seen.setdefault(c, None)
        if not seen:
            raise IStringParseError("cannot infer an alphabet from don't-care symbols only; declare it")
        alphabet = Alphabet(tuple(seen))
    if alphabet.size > max_alphabet:
        raise IStringParseError(f"alphabet of size {alphabet.size} exceeds the configured maximum {max_alphabet}")

    cells: List[int] = []
    for token in tokens:
        if token is None:
            cells.append(alphabet.full_mask)
            continue
        mask = 0
        for c in token:
            mask |= 1 << alphabet.rank(c)
        cells.append(mask)
    return IString(alphabet, cells)


def _body_tokens(text: IString) -> List[str]:
    symbols = text.alphabet.symbols
    full = text.alphabet.full_mask
    tokens: List[str] = []
    for cell in text.cells:
        if not cell & (cell - 1):
            tokens.append(symbols[lowest_rank(cell)])
        elif cell == full:
            tokens.append(DONT_CARE)
        else:
            tokens.append("[" + "".join(symbols[r] for r in mask_members(cell)) + "]")
    return tokens


def infers_alphabet(text: IString) -> bool:
    """True when the bare body re-parses to the same alphabet, ranks included"""
    seen: Dict[str, None] = {}
    for token in _body_tokens(text):
        for c in token.strip("[]"):
            if c != DONT_CARE:
                seen.setdefault(c, None)
    return tuple(seen) == text.alphabet.symbols


def format_istring(text: IString, header: Optional[bool] = None) -> str:
    """
    Canonical text: bracket sets sorted by rank, `?` for the full alphabet

    header=None writes the `#alphabet=` line only when the body alone would infer a
    different alphabet, so parse_istring(format_istring(t)) == t always holds.
    """
    if header is None:
        header = not infers_alphabet(text)
    body = "".join(_body_tokens(text))
    if header:
        return f"{ALPHABET_HEADER}{''.join(text.alphabet.symbols)}\n{body}"
    return body


def split_records(text: str) -> List[str]:
    """
    Split a file holding several i-strings, each starting with its `#alphabet=` line.
    Text without a second header is a single record.
    """
    records: List[List[str]] = [[]]
    for line in text.splitlines():
        if line.strip().startswith(ALPHABET_HEADER) and any(s.strip() for s in records[-1]):
            records.append([])
        records[-1].append(line)
    return ["\n".join(lines).strip() for lines in records if any(s.strip() for s in lines)]


def symbols_match(text: IString, i: int, j: int) -> bool:
    return text.symbols_match(i, j)


def match_factors(text: IString, i: int, j: int, length: int) -> bool:
    return text.match_factors(i, j, length)


def odot(text: IString, m: int, i: int, pattern: Optional[IString] = None) -> IString:
    return text.odot(m, i, pattern)


def reverse(text: IString) -> IString:
    return text.reverse()
