"""
Tests for the i-string model: parsing, formatting, matching, ⊙ and reversal
"""

import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from engine.errors import IStringParseError
from engine.generator import instance_stream, random_istring
from engine.istring import Alphabet, IString, format_istring, infers_alphabet, parse_istring, split_records

FIG1 = "bb??abb??ba?"


def test_parse_partial_word():
    t = parse_istring(FIG1, "ab")
    assert t.n == 12
    assert t.k == 5
    assert t.nonsolid_positions == (3, 4, 8, 9, 12)
    assert t.is_partial_word

    remark = parse_istring("a?b", "ab")
    assert (remark.n, remark.k) == (3, 1)
    assert remark.is_partial_word


def test_parse_infers_alphabet_in_first_appearance_order():
    t = parse_istring("a[bc]")
    assert t.alphabet.symbols == ("a", "b", "c")
    assert (t.n, t.k) == (2, 1)
    assert not t.is_partial_word

    assert parse_istring("ba?").alphabet.symbols == ("b", "a")


def test_parse_header_and_whitespace():
    t = parse_istring("#alphabet=abc\na ?\n b")
    assert t.sigma == 3
    assert t.cells[1] == 0b111
    assert format_istring(t, header=False) == "a?b"
    assert format_istring(t, header=True) == "#alphabet=abc\na?b"
    # c appears only through the don't care, so the body alone would lose it
    assert format_istring(t) == "#alphabet=abc\na?b"


@pytest.mark.parametrize("source, alphabet", [
    ("", None),
    ("   \n", None),
    ("a[]b", None),
    ("abc", "ab"),
    ("a[bc", None),
    ("???", None),
    ("a]b", None),
])
def test_parse_errors(source, alphabet):
    with pytest.raises(IStringParseError):
        parse_istring(source, alphabet)


def test_parse_rejects_wide_alphabet():
    with pytest.raises(IStringParseError):
        parse_istring("abc", max_alphabet=2)


def test_unary_alphabet_dont_care_is_solid():
    t = parse_istring("a?a", "a")
    assert t.k == 0
    assert t.solid_word() == "aaa"


def test_format_round_trip():
    t = parse_istring("a[cb]?[ab]", "abc")
    assert format_istring(t) == "a[bc]?[ab]"
    assert parse_istring(format_istring(t), "abc") == t
    for rng in instance_stream(3, 20):
        r = random_istring(rng, 15, 5, 3, partial=bool(rng.integers(0, 2)))
        assert parse_istring(format_istring(r), r.alphabet) == r


def test_format_round_trip_without_declared_alphabet():
    t = parse_istring("[ab]a")
    assert format_istring(t, header=False) == "?a"
    assert format_istring(t) == "#alphabet=ab\n?a"
    assert not infers_alphabet(t)
    again = parse_istring(format_istring(t))
    assert again == t
    assert (again.sigma, again.alphabet.symbols) == (2, ("a", "b"))

    # ranks follow the declared order even when the body lists symbols differently
    t = parse_istring("ba?", "ab")
    assert format_istring(t) == "#alphabet=ab\nba?"
    assert parse_istring(format_istring(t)) == t

    solid = parse_istring("abca")
    assert infers_alphabet(solid)
    assert format_istring(solid) == "abca"

    for rng in instance_stream(13, 200):
        r = random_istring(rng, 8, 4, 3, partial=bool(rng.integers(0, 2)))
        assert parse_istring(format_istring(r)) == r


def test_split_records():
    source = "#alphabet=ab\na?\n#alphabet=abc\n?c\n\n"
    records = split_records(source)
    assert records == ["#alphabet=ab\na?", "#alphabet=abc\n?c"]
    assert [parse_istring(r).sigma for r in records] == [2, 3]
    assert split_records("a?b\nab\n") == ["a?b\nab"]
    assert split_records("  \n") == []


def test_symbols_match_example_strings():
    # A = a{b,c} at 1..2, B = a{a,b} at 3..4, C = aa at 5..6
    t = parse_istring("a[bc]a[ab]aa", "abc")
    assert t.match_factors(1, 3, 2)
    assert t.match_factors(3, 5, 2)
    assert not t.match_factors(1, 5, 2)
    assert not t.symbols_match(2, 6)
    assert all(t.symbols_match(i, i) for i in range(1, t.n + 1))


def test_symbols_match_against_set_intersection():
    for rng in instance_stream(11, 30):
        t = random_istring(rng, 14, 6, 4, partial=bool(rng.integers(0, 2)))
        for i in range(1, t.n + 1):
            for j in range(1, t.n + 1):
                assert t.symbols_match(i, j) == bool(t.cells[i - 1] & t.cells[j - 1])


def test_intersection_table_labels():
    t = parse_istring("[ab][bc][ab][ac]", "abc")
    table = t.xtable
    assert table.match(1, 2)
    assert not table.same_intersection(1, 2, 1, 4)
    assert table.same_intersection(1, 3, 1, 1)


def test_match_factors():
    t = parse_istring(FIG1, "ab")
    assert t.match_factors(1, 6, 4)
    assert not t.match_factors(1, 6, 5)
    assert t.match_factors(3, 7, 0)
    with pytest.raises(IndexError):
        t.match_factors(10, 1, 4)


def test_odot():
    t = parse_istring("bb??abb??baa", "ab")
    u = parse_istring("b?a?", "ab")
    assert format_istring(t.odot(4, 1, u), header=False) == "bba?"
    assert format_istring(t.odot(4, 6, u), header=False) == "bba?"
    assert format_istring(t.odot(4, 9, u), header=False) == "bbaa"
    with pytest.raises(ValueError):
        t.odot(4, 5, u)

    solid = parse_istring("abab?", "ab")
    assert format_istring(solid.odot(4, 1)) == "abab"


def test_odot_matches_both_factors():
    for rng in instance_stream(5, 20):
        t = random_istring(rng, 12, 4, 3)
        for m in range(1, 6):
            for i in range(1, t.n - m + 2):
                if not t.match_factors(1, i, m):
                    continue
                meet = t.odot(m, i)
                joint, offset = meet.concat(t)
                assert joint.match_factors(1, offset, m)
                assert joint.match_factors(1, offset + i - 1, m)


def test_reverse():
    t = parse_istring("a?b", "ab")
    assert format_istring(t.reverse(), header=False) == "b?a"
    assert t.reverse().reverse() == t
    pal = parse_istring("ab?ba", "ab")
    assert pal.reverse() == pal


def test_completions_in_rank_order():
    t = parse_istring("a?b", "ab")
    words = [t.alphabet.word(c) for c in t.completions()]
    assert words == ["aab", "abb"]
    assert t.completion_count() == 2
    assert t.completion_count(1, 1) == 1


def test_concat_uses_fresh_separator():
    t = parse_istring("ab?", "ab")
    joint, offset = t.concat(t)
    assert offset == 5
    assert joint.sigma == 3
    assert joint.is_solid(4)
    assert not any(joint.symbols_match(4, j) for j in range(1, joint.n + 1) if j != 4)


def test_alphabet_rejects_duplicates_and_reserved():
    with pytest.raises(IStringParseError):
        Alphabet.of("aa")
    with pytest.raises(IStringParseError):
        Alphabet.of("a?")
    with pytest.raises(IStringParseError):
        IString(Alphabet.of("ab"), [0b100])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
