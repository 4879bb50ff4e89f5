"""Independent pairing-sum oracle and its agreement with the engine."""

from fractions import Fraction

import pytest

from dtlab.cumulants import is_balanced, scalar_moment
from dtlab.errors import ConfigError
from dtlab.pairings import noncrossing_pairings, pairing_oracle


def test_pairing_counts():
    assert len(noncrossing_pairings("*1")) == 1
    assert len(noncrossing_pairings("**11")) == 1
    assert len(noncrossing_pairings("*1*1")) == 2
    assert len(noncrossing_pairings("11")) == 0  # same letters cannot pair
    assert noncrossing_pairings("") == [()]


def test_pairings_join_opposite_letters_without_crossing():
    for p in noncrossing_pairings("*1*1*1"):
        word = "*1*1*1"
        for i, j in p:
            assert word[i] != word[j]
        pairs = sorted(p)
        for a in range(len(pairs)):
            for b in range(a + 1, len(pairs)):
                (i1, j1), (i2, j2) = pairs[a], pairs[b]
                crossing = i1 < i2 < j1 < j2
                assert not crossing


def test_catalan_counts_for_alternating_words():
    # alternating words have non-crossing pairing counts 1, 2, 5, 14
    catalan = [1, 2, 5, 14]
    for k, expected in enumerate(catalan, start=1):
        word = "*1" * k
        assert len(noncrossing_pairings(word)) == expected


def test_oracle_known_values():
    assert pairing_oracle("") == 1
    assert pairing_oracle("*1") == Fraction(1, 2)
    assert pairing_oracle("1*") == Fraction(1, 2)
    assert pairing_oracle("**11") == Fraction(1, 6)
    assert pairing_oracle("*1*1") == Fraction(2, 3)
    assert pairing_oracle("*11*") == Fraction(1, 6)
    assert pairing_oracle("11") == 0


def test_oracle_word_cap():
    with pytest.raises(ConfigError):
        pairing_oracle("*1" * 10)


def test_engine_matches_oracle_up_to_length_six():
    # the full length-8 sweep lives in the acceptance suite
    for n in (0, 2, 4, 6):
        for bits in range(2**n):
            word = "".join("1*"[(bits >> i) & 1] for i in range(n))
            if is_balanced(word):
                assert scalar_moment(word) == pairing_oracle(word), word
