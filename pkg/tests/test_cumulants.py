"""Moment engine: frozen exact values, symmetries, coefficient handling."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtlab.bpoly import BElem, trace
from dtlab.cumulants import (
    CoeffWord,
    check_coeff_bound,
    check_positivity,
    is_balanced,
    moment,
    scalar_moment,
    validate_word,
)
from dtlab.errors import ConfigError

X = BElem.x()
ONE = BElem.one()

# frozen by hand before the engine existed: iterated integrals of 1 over the
# nestings of each word (see tests/test_pairings.py for the independent route)
KNOWN_MOMENTS = {
    "": ONE,
    "*1": X,
    "1*": ONE - X,
    "**11": BElem((0, 0, Fraction(1, 2))),  # x^2/2
    "*1*1": X + BElem((0, 0, Fraction(1, 2))),  # x + x^2/2
    "*11*": X - X * X,
    "11**": BElem((Fraction(1, 2), -1, Fraction(1, 2))),  # 1/2 - x + x^2/2
}

KNOWN_TRACES = {
    "*1": Fraction(1, 2),
    "1*": Fraction(1, 2),
    "**11": Fraction(1, 6),
    "11**": Fraction(1, 6),
    "*11*": Fraction(1, 6),
    "1**1": Fraction(1, 6),
    "*1*1": Fraction(2, 3),
    "1*1*": Fraction(2, 3),
}


def test_known_moment_polynomials():
    for word, expected in KNOWN_MOMENTS.items():
        assert moment(word) == expected, word


def test_known_traces():
    for word, expected in KNOWN_TRACES.items():
        assert scalar_moment(word) == expected, word


def test_unbalanced_words_vanish():
    for word in ("1", "*", "11", "**", "1*1", "***1"):
        assert moment(word).is_zero
        assert scalar_moment(word) == 0


def test_word_validation():
    with pytest.raises(ConfigError):
        validate_word("1x*")
    with pytest.raises(ConfigError):
        moment("abc")
    with pytest.raises(ConfigError):
        moment("1*" * 10, max_length=16)


def test_is_balanced():
    assert is_balanced("")
    assert is_balanced("*1")
    assert not is_balanced("1")
    assert not is_balanced("111*")


def _balanced_words(length):
    if length == 0:
        return [""]
    out = []
    for bits in range(2**length):
        w = "".join("1*"[(bits >> i) & 1] for i in range(length))
        if is_balanced(w):
            out.append(w)
    return out


@settings(deadline=None)
@given(st.sampled_from([w for n in (2, 4, 6, 8) for w in _balanced_words(n)]))
def test_flip_symmetry(word):
    # swapping letters mirrors the polynomial around x = 1/2
    flipped = word.replace("1", "#").replace("*", "1").replace("#", "*")
    m = moment(word)
    mf = moment(flipped)
    for x in (Fraction(0), Fraction(1, 3), Fraction(2, 5), Fraction(1)):
        assert mf(x) == m(1 - x)


def test_coeff_word_unit_coeffs_match_plain():
    cw = CoeffWord("*1*1")
    assert cw.coeffs == (ONE, ONE, ONE, ONE)
    assert moment(cw) == moment("*1*1")


def test_coeff_word_length_mismatch():
    with pytest.raises(ConfigError):
        CoeffWord("*1", (ONE,))


def test_constant_coeffs_scale_the_moment():
    cw = CoeffWord("*1", (BElem.constant(3), BElem.constant("1/2")))
    assert moment(cw) == moment("*1") * Fraction(3, 2)


def test_linear_coeff_moment_by_hand():
    # E(T* x T) = alpha21(x b2) with b2 = 1: int_0^x t dt = x^2/2
    cw = CoeffWord("*1", (X, ONE))
    assert moment(cw) == BElem((0, 0, Fraction(1, 2)))
    # coefficient on the closing letter multiplies afterwards:
    # E(T* T x) = alpha21(1) * x = x^2
    cw2 = CoeffWord("*1", (ONE, X))
    assert moment(cw2) == X * X


def test_positivity_known_words():
    for word in KNOWN_MOMENTS:
        assert check_positivity(word)


def test_positivity_grid_validation():
    with pytest.raises(ConfigError):
        check_positivity("*1", grid_size=1)


def test_coeff_bound_simple():
    cw = CoeffWord("*1*1", (2 * ONE, X, ONE - X, ONE))
    assert check_coeff_bound(cw)


def test_trace_of_moment_equals_scalar_moment():
    for word in KNOWN_TRACES:
        assert trace(moment(word)) == scalar_moment(word)
