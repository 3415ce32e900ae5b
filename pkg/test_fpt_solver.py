"""
Tests for the FPT solvers: ambiguous positions, the solid column table, TestCover,
covering-set chains, the general solver and the partial-word solver
"""

import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from engine.cover_engine import minimize_covering_set, simple_solve
from engine.errors import NotPartialWordError, ResourceBudgetError
from engine.fpt_solver import (
    SolidColumnTable,
    ambiguous_positions,
    covering_chains,
    fpt_solve_general,
    fpt_solve_partial,
    test_cover as run_test_cover,
)
from engine.generator import random_instances
from engine.istring import parse_istring
from engine.lcp_index import build_index
from engine.oracle import brute_shortest_cover, is_cover, naive_occurrences, validate_cover_result
from engine.resources import ResourceGuard

FIG1 = "bb??abb??ba?"


def test_ambiguous_positions_fig1():
    assert ambiguous_positions(parse_istring(FIG1, "ab")) == [1, 2, 4, 5, 6, 7, 9, 10]
    assert ambiguous_positions(parse_istring("abab", "ab")) == []


def test_solid_column_table():
    text = parse_istring("[ab][bc]?", "abc")
    table = SolidColumnTable(text)
    assert table.common_symbol([1, 2]) == 1
    assert table.common_symbol([1, 3]) == 0
    assert table.common_symbol([2, 3]) == 1
    assert table.common_symbol([1, 2, 3]) == 1
    assert table.entry(0) == 0


def test_solid_column_table_empty_intersection():
    text = parse_istring("[ab][cd]", "abcd")
    table = SolidColumnTable(text)
    assert table.common_symbol([1, 2]) is None
    assert table.common_symbol([2]) == 2


def test_solid_column_table_budget():
    with pytest.raises(ResourceBudgetError) as excinfo:
        SolidColumnTable(parse_istring("[ab][ab][ab]c", "abc"), max_k=2)
    assert excinfo.value.budget == "table_max_k"


def test_test_cover_fig1():
    index = build_index(parse_istring(FIG1, "ab"))
    assert run_test_cover(index, [1, 3, 6, 9]) == "bbab"
    assert run_test_cover(index, [1, 9]) is None
    assert run_test_cover(index, [3, 9]) is None


def test_test_cover_general_uses_table():
    # column at the two non-solid cells must pick the shared symbol b
    text = parse_istring("[ab]c[bc]c", "abc")
    index = build_index(text)
    assert run_test_cover(index, [1, 3]) == "bc"


def test_covering_chains():
    guard = ResourceGuard("max_subsets", 100)
    assert list(covering_chains([1, 2, 4, 5], 5, 2, 4, guard)) == [(1, 2, 4, 5)]
    assert list(covering_chains([1, 2, 4, 5], 5, 2, 3, guard)) == []
    chains = set(covering_chains([1, 2, 4, 5], 5, 3, 4, guard))
    assert chains == {(1, 4, 5), (1, 2, 5), (1, 2, 4, 5)}
    assert list(covering_chains([1], 1, 3, 2, guard)) == [(1,)]
    assert list(covering_chains([2, 3], 3, 3, 2, guard)) == []


def test_covering_chains_charges_budget():
    guard = ResourceGuard("max_subsets", 1)
    with pytest.raises(ResourceBudgetError):
        list(covering_chains([1, 2, 3, 4], 4, 3, 4, guard))


def test_fpt_general_fig1():
    text = parse_istring(FIG1, "ab")
    result = fpt_solve_general(build_index(text))
    assert (result.length, result.witness) == (4, "bbaa")
    assert validate_cover_result(result, text)


def test_fpt_partial_fig1():
    text = parse_istring(FIG1, "ab")
    result = fpt_solve_partial(build_index(text))
    assert (result.length, result.witness) == (4, "bbaa")
    assert validate_cover_result(result, text)
    assert sorted(brute_shortest_cover(text).shortest_witnesses) == ["bbaa", "bbab"]


def test_fpt_partial_fills_unconstrained_holes_with_lowest_rank():
    # no occurrence puts an a under the first column, yet aac still covers
    text = parse_istring("????c?ac", "abc")
    oracle = brute_shortest_cover(text)
    assert oracle.shortest_witnesses == ["aac", "bac", "cac"]
    result = fpt_solve_partial(build_index(text))
    assert (result.length, result.witness) == (3, "aac")
    assert validate_cover_result(result, text)


def test_fpt_partial_length_bound():
    index = build_index(parse_istring(FIG1, "ab"))
    assert fpt_solve_partial(index, max_length=3) is None
    assert fpt_solve_partial(index, max_length=4).witness == "bbaa"
    assert fpt_solve_partial(build_index(parse_istring("aaaa")), max_length=1).length == 1


def test_fpt_partial_rejects_general_istrings():
    with pytest.raises(NotPartialWordError):
        fpt_solve_partial(build_index(parse_istring("a[ab]c", "abc")))


@pytest.mark.parametrize("word, alphabet, length", [
    ("a?b", "ab", 2),
    ("?????", "ab", 1),
    ("aaaa", None, 1),
    ("abcab", None, 5),
])
def test_fpt_small_words(word, alphabet, length):
    text = parse_istring(word, alphabet)
    index = build_index(text)
    assert fpt_solve_general(index).length == length
    if text.is_partial_word:
        assert fpt_solve_partial(index).length == length


@pytest.mark.parametrize("seed, n, k, sigma", [
    (11, 10, 2, 2),
    (12, 12, 4, 2),
    (13, 12, 3, 3),
    (14, 14, 5, 2),
])
def test_partial_solvers_match_oracle(seed, n, k, sigma):
    for text in random_instances(seed, 25, n, k, sigma, partial=True):
        index = build_index(text)
        expected = brute_shortest_cover(text).shortest
        for result in (fpt_solve_general(index), fpt_solve_partial(index)):
            assert (result.length, result.witness) == (expected.length, expected.witness)
            assert validate_cover_result(result, text)


@pytest.mark.parametrize("seed, n, k, sigma", [
    (21, 10, 3, 3),
    (22, 12, 4, 3),
    (23, 11, 5, 4),
])
def test_general_solver_matches_oracle(seed, n, k, sigma):
    for text in random_instances(seed, 25, n, k, sigma):
        result = fpt_solve_general(build_index(text))
        expected = brute_shortest_cover(text).shortest
        assert (result.length, result.witness) == (expected.length, expected.witness)
        assert result.length == simple_solve(text).length
        assert validate_cover_result(result, text)


def _is_odot_prefix(text, ranks, hits):
    m = len(ranks)
    for i in hits:
        meet = text.odot(m, i)
        if meet.k == 0 and meet.lowest_completion() == tuple(ranks):
            return True
    return False


@pytest.mark.parametrize("seed, sigma, partial", [(31, 2, True), (32, 3, False)])
def test_covers_that_are_not_odot_prefixes_have_small_ambiguous_covering_sets(seed, sigma, partial):
    seen = 0
    for text in random_instances(seed, 30, 10, 3, sigma, partial):
        ambiguous = set(ambiguous_positions(text))
        for m in range(1, text.n + 1):
            for ranks in text.completions(1, m):
                hits = naive_occurrences(ranks, text)
                if not is_cover(ranks, text) or _is_odot_prefix(text, ranks, hits):
                    continue
                seen += 1
                assert set(hits) <= ambiguous
                assert len(minimize_covering_set(hits, m, text.n)) <= 2 * text.k
    assert seen


def test_fpt_table_budget_refusal():
    text = parse_istring("a[ab]c", "abc")
    with pytest.raises(ResourceBudgetError) as excinfo:
        fpt_solve_general(build_index(text), table_max_k=0)
    assert excinfo.value.budget == "table_max_k"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
