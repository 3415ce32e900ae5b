"""
Tests for the brute-force references: occurrences, cover checks, the shortest-cover
oracle, Universal Mismatch and truth-table SAT
"""

import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from engine.errors import ResourceBudgetError
from engine.generator import instance_stream, random_istring
from engine.istring import parse_istring
from engine.oracle import (
    brute_sat,
    brute_shortest_cover,
    brute_universal_mismatch,
    find_model,
    is_cover,
    iter_universal_mismatch_solutions,
    naive_occurrences,
    partial_words_match,
    validate_cover_result,
)
from engine.service import check
from models.cover_models import CoverResult
from models.reduction_models import CnfFormula

FIG1 = "bb??abb??ba?"


def test_naive_occurrences():
    text = parse_istring(FIG1, "ab")
    assert naive_occurrences("bbaa", text) == [1, 2, 6, 9]
    assert naive_occurrences("bbab", text)[:2] == [1, 3]
    assert naive_occurrences("c", text) == []
    assert naive_occurrences("a" * 13, text) == []


def test_is_cover():
    text = parse_istring(FIG1, "ab")
    assert is_cover("bbaa", text)
    assert is_cover("bbab", text)
    assert not is_cover("bba", text)
    assert not is_cover("", text)
    assert is_cover((1, 1, 0, 0), text)


def test_validate_cover_result():
    text = parse_istring(FIG1, "ab")
    good = CoverResult(length=4, witness="bbaa", covering_set=[9, 1, 6, 2], algorithm="test")
    assert good.covering_set == [1, 2, 6, 9]
    assert validate_cover_result(good, text)
    # 3 is not an occurrence of bbaa
    assert not validate_cover_result(
        CoverResult(length=4, witness="bbaa", covering_set=[1, 3, 6, 9], algorithm="test"), text
    )
    # gap 9 - 1 exceeds the length
    assert not validate_cover_result(
        CoverResult(length=4, witness="bbaa", covering_set=[1, 9], algorithm="test"), text
    )
    assert not validate_cover_result(
        CoverResult(length=3, witness="bbaa", covering_set=[1, 2, 6, 9], algorithm="test"), text
    )


def test_brute_shortest_cover_fig1():
    report = brute_shortest_cover(parse_istring(FIG1, "ab"))
    assert report.shortest.length == 4
    assert report.shortest.witness == "bbaa"
    assert report.shortest_witnesses == ["bbaa", "bbab"]
    assert report.all_lengths[0] == 4
    assert report.all_lengths[-1] == 12
    assert report.enumerated > 0


def test_brute_shortest_cover_all_lengths():
    report = brute_shortest_cover(parse_istring("a?b", "ab"))
    assert report.all_lengths == [2, 3]
    assert report.shortest.witness == "ab"
    assert report.shortest.covering_set == [1, 2]


def test_brute_shortest_cover_max_length():
    report = brute_shortest_cover(parse_istring("abcab"), max_length=4)
    assert report.shortest is None
    assert report.all_lengths == []
    assert report.max_length == 4


def test_brute_shortest_cover_budget():
    with pytest.raises(ResourceBudgetError) as excinfo:
        brute_shortest_cover(parse_istring("?" * 30, "ab"), budget=1000)
    assert excinfo.value.budget == "oracle_budget"


def test_partial_words_match():
    assert partial_words_match("0?1", "001")
    assert partial_words_match("???", "101")
    assert not partial_words_match("0?1", "1?1")
    assert not partial_words_match("01", "011")


def test_universal_mismatch_example():
    words = ["001?0", "1??0?", "?10?1"]
    solutions = list(iter_universal_mismatch_solutions(words))
    assert "10110" in solutions
    assert all(not partial_words_match(v, w) for v in solutions for w in words)
    first = brute_universal_mismatch(words)
    assert first == solutions[0]


def test_universal_mismatch_unsolvable():
    assert brute_universal_mismatch(["0", "1"]) is None
    assert brute_universal_mismatch(["?"]) is None
    assert brute_universal_mismatch([], length=2) == "??"
    with pytest.raises(ValueError):
        brute_universal_mismatch([])


def test_universal_mismatch_budget():
    with pytest.raises(ResourceBudgetError):
        brute_universal_mismatch(["0" * 12], budget=100)


def test_find_model():
    formula = CnfFormula(p=5, clauses=[[1, 2, -3, 5], [-1, 4], [-2, 3, -5]])
    model = find_model(formula)
    assert model is not None
    assert all(any(model[abs(l) - 1] == (l > 0) for l in clause) for clause in formula.clauses)
    assert not brute_sat(CnfFormula(p=1, clauses=[[1], [-1]]))
    assert brute_sat(CnfFormula(p=2, clauses=[]))


def test_find_model_budget():
    with pytest.raises(ResourceBudgetError) as excinfo:
        find_model(CnfFormula(p=30, clauses=[[1]]), max_vars=24)
    assert excinfo.value.budget == "sat_max_vars"


def test_every_solver_matches_the_oracle_on_seeded_instances():
    checked = 0
    for rng in instance_stream(2024, 10_000):
        n = int(rng.integers(1, 17))
        sigma = int(rng.integers(2, 4))
        k = int(rng.integers(0, min(4, n) + 1))
        text = random_istring(rng, n, k, sigma, partial=bool(rng.integers(0, 2)))
        report = check(text)
        ran = {r.algorithm for r in report.reports}
        assert {"simple", "odot", "fpt", "oracle"} <= ran, report.text
        assert text.is_partial_word <= ("partial" in ran)
        assert report.agreed, (report.text, report.disagreements)
        assert all(r.result.witness == report.expected_witness for r in report.reports if r.algorithm != "odot")
        checked += 1
    assert checked == 10_000


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
