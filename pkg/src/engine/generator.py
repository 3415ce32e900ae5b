"""
Seeded instance generation

One 64-bit seed feeds numpy's SeedSequence; every instance gets its own spawned
child sequence and a PCG64 generator, so instance i is the same whatever count is asked for.
"""

import string
from typing import Iterator, List

import numpy as np

from config import DEFAULT_SEED
from models.reduction_models import CnfFormula
from .istring import Alphabet, IString

SYMBOLS = string.ascii_lowercase + string.digits


def default_alphabet(sigma: int) -> Alphabet:
    if not 1 <= sigma <= len(SYMBOLS):
        raise ValueError(f"sigma must be in 1..{len(SYMBOLS)} for generated instances")
    return Alphabet.of(SYMBOLS[:sigma])


def instance_stream(seed: int = DEFAULT_SEED, count: int = 1) -> List[np.random.Generator]:
    """Independent generators, one per instance, from a single seed"""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


def random_istring(
    rng: np.random.Generator,
    n: int,
    k: int,
    sigma: int,
    partial: bool = False,
) -> IString:
    """
    Random i-string with exactly k non-solid cells

    Args:
        rng: numpy generator
        n: length
        k: number of non-solid cells (≤ n)
        sigma: alphabet size; k > 0 needs sigma ≥ 2
        partial: make every non-solid cell the full alphabet

    Returns:
        IString over the first sigma symbols of a-z0-9
    """
    if n < 1 or not 0 <= k <= n:
        raise ValueError(f"need n ≥ 1 and 0 ≤ k ≤ n, got n={n}, k={k}")
    if k and sigma < 2:
        raise ValueError("non-solid cells need an alphabet of at least two symbols")
    alphabet = default_alphabet(sigma)
    cells = [1 << int(r) for r in rng.integers(0, sigma, size=n)]
    for position in rng.choice(n, size=k, replace=False):
        if partial:
            cells[int(position)] = alphabet.full_mask
            continue
        size = int(rng.integers(2, sigma + 1))
        members = rng.choice(sigma, size=size, replace=False)
        cells[int(position)] = sum(1 << int(r) for r in members)
    return IString(alphabet, cells)


def random_instances(
    seed: int,
    count: int,
    n: int,
    k: int,
    sigma: int,
    partial: bool = False,
) -> Iterator[IString]:
    for rng in instance_stream(seed, count):
        yield random_istring(rng, n, k, sigma, partial)


def random_cnf(rng: np.random.Generator, p: int, m: int, width: int = 3) -> CnfFormula:
    """m clauses over distinct variables (no tautologies), width capped at p"""
    width = min(width, p)
    clauses = []
    for _ in range(m):
        variables = rng.choice(p, size=width, replace=False) + 1
        signs = rng.integers(0, 2, size=width) * 2 - 1
        clauses.append([int(v * s) for v, s in zip(variables, signs)])
    return CnfFormula(p=p, clauses=clauses)
