"""Edit distance against an independent oracle, plus metric axioms."""

import random
import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kchlint.distance import api_threshold, identifier_threshold, levenshtein, nearest

ALPHABET = string.ascii_lowercase + "_"


def reference_levenshtein(a: str, b: str) -> int:
    """Full-matrix dynamic program, straight from the recurrence."""
    rows = len(a) + 1
    cols = len(b) + 1
    table = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        table[i][0] = i
    for j in range(cols):
        table[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + cost,
            )
    return table[rows - 1][cols - 1]


def test_matches_reference_on_random_pairs():
    rng = random.Random(20260816)
    for _ in range(1000):
        a = "".join(rng.choice(ALPHABET) for _ in range(rng.randint(0, 15)))
        b = "".join(rng.choice(ALPHABET) for _ in range(rng.randint(0, 15)))
        assert levenshtein(a, b) == reference_levenshtein(a, b), (a, b)


@pytest.mark.parametrize(
    "a,b,expected",
    [
        ("", "", 0),
        ("", "abc", 3),
        ("abc", "", 3),
        ("kitten", "sitting", 3),
        ("flaw", "lawn", 2),
        ("read_exel", "read_excel", 1),
        ("arrya", "array", 2),
        ("max_len_len_str", "max_len_str", 4),
        ("same", "same", 0),
    ],
)
def test_known_distances(a, b, expected):
    assert levenshtein(a, b) == expected


word = st.text(alphabet=ALPHABET, max_size=12)


@given(word, word)
def test_symmetry(a, b):
    assert levenshtein(a, b) == levenshtein(b, a)


@given(word)
def test_identity(a):
    assert levenshtein(a, a) == 0


@given(word, word)
def test_positive_when_different(a, b):
    if a != b:
        assert levenshtein(a, b) >= 1


@given(word, word, word)
def test_triangle_inequality(a, b, c):
    assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


@given(word, word)
def test_bounded_by_longer_length(a, b):
    assert levenshtein(a, b) <= max(len(a), len(b))


@pytest.mark.parametrize(
    "name,expected",
    [
        ("ab", 1),
        ("abc", 1),
        ("abcd", 2),
        ("abcdef", 2),
        ("read_exel", 2),
        ("a_very_long_callable_name", 2),
    ],
)
def test_api_threshold_caps_at_two(name, expected):
    assert api_threshold(name) == expected


@pytest.mark.parametrize(
    "name,expected",
    [
        ("abc", 1),
        ("abcdef", 2),
        ("max_len_len_str", 5),
    ],
)
def test_identifier_threshold_scales_with_length(name, expected):
    assert identifier_threshold(name) == expected


def test_nearest_picks_minimum_distance():
    assert nearest("read_exel", ["read_csv", "read_excel", "read_json"]) == (
        "read_excel",
        1,
    )


def test_nearest_breaks_ties_lexicographically():
    # both candidates sit at distance 1
    assert nearest("loas", ["loads", "load"]) == ("load", 1)


def test_nearest_empty_candidates():
    assert nearest("anything", []) is None
