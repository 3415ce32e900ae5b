"""
CNF-SAT → shortest cover of a binary partial word

CNF ↔ Universal Mismatch, the morphisms h and μ, the gadgets β_j and γ_W,
the reduction word with threshold d = 4p + 3, its decoder and a desk-scale verifier.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from config import DIMACS_STRICT, ORACLE_BUDGET
from models.reduction_models import (
    CnfFormula,
    MismatchInstance,
    ReductionLayout,
    ReductionOutput,
    VerificationReport,
)
from utils.logger import get_logger
from .errors import CnfFormatError
from .istring import Alphabet, IString, parse_istring
from .oracle import (
    brute_shortest_cover,
    is_cover,
    iter_universal_mismatch_solutions,
    naive_occurrences,
    partial_words_match,
)

logger = get_logger(__name__)

BINARY = Alphabet.of("01")
PI = "0?0?"
H_BLOCKS = {"0": "0100", "1": "0001", "?": "0000"}
MU_BLOCKS = {"0": "??0?", "1": "0???", "?": "0?0?"}
H_INVERSE = {block: symbol for symbol, block in H_BLOCKS.items()}


# --- DIMACS ---------------------------------------------------------------------

def parse_dimacs(text: str, strict: bool = DIMACS_STRICT) -> CnfFormula:
    """
    Read `p cnf <vars> <clauses>` followed by zero-terminated clauses

    Args:
        text: DIMACS source; `c` lines are comments, `%` ends the clause section
        strict: reject tautological clauses and duplicate literals; otherwise drop
            tautologies (with a warning) and deduplicate literals

    Returns:
        CnfFormula
    """
    header = None
    tokens: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfFormatError(f"line {lineno}: malformed problem line {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise CnfFormatError(f"line {lineno}: malformed problem line {line!r}") from None
            continue
        if header is None:
            raise CnfFormatError(f"line {lineno}: clause before the problem line")
        try:
            tokens.extend(int(tok) for tok in line.split())
        except ValueError:
            raise CnfFormatError(f"line {lineno}: non-integer literal in {line!r}") from None
    if header is None:
        raise CnfFormatError("missing `p cnf` problem line")

    p, declared = header
    clauses: List[List[int]] = []
    current: List[int] = []
    for literal in tokens:
        if literal == 0:
            clauses.append(current)
            current = []
            continue
        if abs(literal) > p:
            raise CnfFormatError(f"literal {literal} outside variables 1..{p}")
        current.append(literal)
    if current:
        clauses.append(current)

    kept: List[List[int]] = []
    for index, clause in enumerate(clauses, start=1):
        if not clause:
            raise CnfFormatError(f"clause {index} is empty")
        if len(set(clause)) != len(clause):
            if strict:
                raise CnfFormatError(f"clause {index} repeats a literal")
            clause = list(dict.fromkeys(clause))
        if any(-lit in clause for lit in clause):
            if strict:
                raise CnfFormatError(f"clause {index} contains a variable and its negation")
            logger.warning(f"dropping tautological clause {index}: {clause}")
            continue
        kept.append(clause)
    if len(clauses) != declared:
        logger.warning(f"problem line declares {declared} clauses, found {len(clauses)}")
    return CnfFormula(p=p, clauses=kept)


def write_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.p} {formula.m}"]
    lines += [" ".join(str(lit) for lit in clause) + " 0" for clause in formula.clauses]
    return "\n".join(lines) + "\n"


# --- CNF ↔ Universal Mismatch ----------------------------------------------------

def cnf_to_mismatch(formula: CnfFormula) -> MismatchInstance:
    """W_i[j] = 0 for x_j ∈ C_i, 1 for ¬x_j ∈ C_i, ? otherwise"""
    words = []
    for index, clause in enumerate(formula.clauses, start=1):
        cells = ["?"] * formula.p
        for literal in clause:
            symbol = "0" if literal > 0 else "1"
            slot = abs(literal) - 1
            if cells[slot] not in ("?", symbol):
                raise CnfFormatError(
                    f"clause {index} contains x{abs(literal)} and its negation; the cell cannot be both 0 and 1"
                )
            cells[slot] = symbol
        words.append("".join(cells))
    return MismatchInstance(words=words, p=formula.p)


def mismatch_to_cnf(instance: MismatchInstance) -> CnfFormula:
    """Inverse of cnf_to_mismatch; an all-? word becomes an empty clause"""
    clauses = []
    for word in instance.words:
        clauses.append([
            (j if c == "0" else -j) for j, c in enumerate(word, start=1) if c != "?"
        ])
    return CnfFormula(p=instance.p, clauses=clauses, allow_empty_clauses=True)


def assignment_to_word(assignment: Sequence[bool]) -> str:
    """V[j] = 1 for a true x_j, 0 for a false one"""
    return "".join("1" if value else "0" for value in assignment)


# --- morphisms and gadgets ------------------------------------------------------------

def h_morphism(word: str) -> str:
    """0 → 0100, 1 → 0001, ? → 0000"""
    return "".join(H_BLOCKS[c] for c in word)


def mu_morphism(word: str) -> str:
    """0 → ??0?, 1 → 0???, ? → 0?0?"""
    return "".join(MU_BLOCKS[c] for c in word)


def target_length(p: int) -> int:
    return 4 * p + 3


def encode_cover(word: str) -> str:
    """The candidate cover 11 h(V) 0"""
    return "11" + h_morphism(word) + "0"


def build_beta(j: int, p: int) -> str:
    """β_j = 11 π^(p-1) 0 ?^(4j+1) 000 ?^d"""
    if not 1 <= j <= p:
        raise ValueError(f"gadget index {j} outside 1..{p}")
    d = target_length(p)
    return "11" + PI * (p - 1) + "0" + "?" * (4 * j + 1) + "000" + "?" * d


def build_gamma(word: str, p: Optional[int] = None) -> str:
    """γ_W = 11 μ(W reversed) 010 ?^d"""
    p = len(word) if p is None else p
    if len(word) != p:
        raise ValueError(f"constraint word {word!r} has length {len(word)}, expected {p}")
    return "11" + mu_morphism(word[::-1]) + "010" + "?" * target_length(p)


def build_reduction(instance: MismatchInstance) -> ReductionOutput:
    """
    T = 11 π^p 0 β_1 … β_p γ_{W_1} … γ_{W_m}

    T has a cover of length d = 4p + 3 iff the instance has a solution, and no shorter cover.
    """
    p, m = instance.p, instance.m
    if p < 1:
        raise ValueError("the reduction needs at least one variable")
    d = target_length(p)
    parts = ["11" + PI * p + "0"]
    beta_starts, gamma_starts = [], []
    cursor = d + 1
    for j in range(1, p + 1):
        beta_starts.append(cursor)
        parts.append(build_beta(j, p))
        cursor += len(parts[-1])
    for word in instance.words:
        gamma_starts.append(cursor)
        parts.append(build_gamma(word, p))
        cursor += len(parts[-1])
    text = "".join(parts)
    length = len(text)
    expected = d + sum(2 * d + 4 * j for j in range(1, p + 1)) + m * (2 * d + 2)
    if length != expected:
        raise RuntimeError(f"reduction word has length {length}, closed form gives {expected}")
    layout = ReductionLayout(beta_starts=beta_starts, gamma_starts=gamma_starts, d=d, length=length)
    logger.info(f"reduction: p={p}, m={m}, d={d}, |T|={length}")
    return ReductionOutput(text=text, p=p, m=m, d=d, length=length, layout=layout)


def reduction_istring(output: ReductionOutput) -> IString:
    return parse_istring(output.text, BINARY)


def decode_cover(word: str, p: int) -> Optional[str]:
    """Inverse of 11 h(V) 0; None when the frame or any block is outside h's image"""
    if len(word) != target_length(p) or not word.startswith("11") or not word.endswith("0"):
        return None
    body = word[2:-1]
    decoded = []
    for start in range(0, len(body), 4):
        symbol = H_INVERSE.get(body[start:start + 4])
        if symbol is None:
            return None
        decoded.append(symbol)
    return "".join(decoded)


# --- verification -----------------------------------------------------------------

def _uncovered(word: str, text: IString) -> List[int]:
    """Positions of T not covered by any occurrence of word"""
    covered = [False] * (text.n + 1)
    for start in naive_occurrences(word, text):
        for t in range(start, start + len(word)):
            covered[t] = True
    return [i for i in range(1, text.n + 1) if not covered[i]]


def verify_reduction(
    instance: MismatchInstance,
    budget: int = ORACLE_BUDGET,
    max_solutions: int = 64,
) -> VerificationReport:
    """
    Check the reduction on one instance.

    (a) 11 h(V) 0 covers T for every mismatch solution V (at most max_solutions checked);
    (b) no cover is shorter than d, and one of length d exists iff a solution exists;
    (c) every length-d cover decodes to a solution.
    """
    output = build_reduction(instance)
    text = reduction_istring(output)
    solutions = iter_universal_mismatch_solutions(instance.words, instance.p, budget)
    first = next(solutions, None)
    report = VerificationReport(p=output.p, m=output.m, d=output.d, satisfiable=first is not None)

    checked = 0
    candidate = first
    while candidate is not None and checked < max_solutions:
        checked += 1
        cover = encode_cover(candidate)
        if not is_cover(cover, text):
            holes = _uncovered(cover, text)
            where = ", ".join(f"{name}+{offset}" for name, offset in map(output.layout.locate, holes[:3]))
            report.fail(f"solution {candidate}: 11h(V)0 leaves {len(holes)} positions uncovered ({where})")
        candidate = next(solutions, None)
    report.solutions_checked = checked

    oracle = brute_shortest_cover(text, budget=budget, max_length=output.d)
    if oracle.shortest is not None:
        report.shortest_length = oracle.shortest.length
        report.witness = oracle.shortest.witness
        if oracle.shortest.length < output.d:
            report.fail(f"cover {oracle.shortest.witness} is shorter than d={output.d}")
    has_d_cover = output.d in oracle.all_lengths
    if has_d_cover != report.satisfiable:
        report.fail(
            f"cover of length d={output.d} {'exists' if has_d_cover else 'is missing'} "
            f"but the instance is {'satisfiable' if report.satisfiable else 'unsatisfiable'}"
        )

    if has_d_cover:
        for witness in oracle.shortest_witnesses:
            decoded = decode_cover(witness, output.p)
            if decoded is None:
                report.fail(f"length-d cover {witness} is not of the form 11h(V)0")
                continue
            if any(partial_words_match(decoded, w) for w in instance.words):
                report.fail(f"length-d cover {witness} decodes to {decoded}, which matches a constraint word")
            elif report.decoded is None:
                report.decoded = decoded

    logger.info(
        f"verify: p={output.p}, m={output.m}, satisfiable={report.satisfiable}, "
        f"passed={report.passed}, solutions checked={checked}"
    )
    return report
