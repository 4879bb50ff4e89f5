"""Moment engine for words in an operator-valued circular pair.

Words are strings over the alphabet {"*", "1"}: "1" stands for the operator
itself, "*" for its adjoint. Optionally each letter carries a diagonal
coefficient (a :class:`~dtlab.bpoly.BElem`) multiplying it on the right.

The conditional expectation of a word is computed by peeling the first letter:
the word splits at every position j > 1 where the letter type flips relative
to position 1 and the prefix through j is balanced; each split contributes

    kernel(b_1 * E(inner word)) * b_j * E(tail word)

where ``kernel`` is alpha12 for an unstarred opener and alpha21 for a starred
one. Unbalanced words have zero expectation; the empty word is the unit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bpoly import BElem, alpha12, alpha21, eval_grid
from .bpoly import trace as b_trace
from .errors import ConfigError

STAR = "*"
ONE = "1"

# Guard against runaway exponential blowup; override per call when a longer
# word is genuinely wanted.
DEFAULT_MAX_WORD_LEN = 16


def validate_word(word: str) -> str:
    if not isinstance(word, str) or any(ch not in (STAR, ONE) for ch in word):
        raise ConfigError(
            "cumulants.word", f"a word is a string over {{'*','1'}}, got {word!r}"
        )
    return word


def _check_length(word: str, max_length: int) -> None:
    if len(word) > max_length:
        raise ConfigError(
            "cumulants.word_cap",
            f"word of length {len(word)} exceeds the cap {max_length}; "
            f"pass max_length explicitly to override",
        )


def is_balanced(word: str) -> bool:
    """True iff the word has as many unstarred letters as starred ones."""
    validate_word(word)
    return 2 * word.count(ONE) == len(word)


@dataclass(frozen=True)
class CoeffWord:
    """A word together with one diagonal coefficient per letter."""

    word: str
    coeffs: tuple[BElem, ...] = field(default=())

    def __post_init__(self) -> None:
        validate_word(self.word)
        if self.coeffs and len(self.coeffs) != len(self.word):
            raise ConfigError(
                "cumulants.coeff_word",
                f"{len(self.word)} letters but {len(self.coeffs)} coefficients",
            )
        if self.coeffs:
            coerced = tuple(
                c if isinstance(c, BElem) else BElem(c) for c in self.coeffs
            )
            object.__setattr__(self, "coeffs", coerced)
        else:
            object.__setattr__(
                self, "coeffs", tuple(BElem.one() for _ in self.word)
            )


def moment(
    cw: CoeffWord | str,
    *,
    max_length: int = DEFAULT_MAX_WORD_LEN,
) -> BElem:
    """Exact conditional expectation of a (coefficiented) word, as a BElem.

    Accepts a plain word string (unit coefficients) or a CoeffWord. Contiguous
    subwords repeat heavily in the recursion, so results are memoized per call
    keyed by the slice bounds; the table never escapes this evaluation.
    """
    if isinstance(cw, str):
        cw = CoeffWord(cw)
    _check_length(cw.word, max_length)
    word, coeffs = cw.word, cw.coeffs

    # prefix balance: bal[i] = (#ones - #stars) among the first i letters
    bal = [0] * (len(word) + 1)
    for i, ch in enumerate(word):
        bal[i + 1] = bal[i] + (1 if ch == ONE else -1)

    memo: dict[tuple[int, int], BElem] = {}

    def expect(lo: int, hi: int) -> BElem:
        if lo == hi:
            return BElem.one()
        if (hi - lo) % 2 or bal[hi] != bal[lo]:
            return BElem.zero()
        key = (lo, hi)
        cached = memo.get(key)
        if cached is not None:
            return cached
        opener = word[lo]
        kernel = alpha12 if opener == ONE else alpha21
        total = BElem.zero()
        for j in range(lo + 1, hi):
            if word[j] != opener and bal[j + 1] == bal[lo]:
                inner = expect(lo + 1, j)
                if inner.is_zero():
                    continue
                tail = expect(j + 1, hi)
                if tail.is_zero():
                    continue
                total = total + kernel(coeffs[lo] * inner) * coeffs[j] * tail
        memo[key] = total
        return total

    return expect(0, len(word))


def scalar_moment(
    cw: CoeffWord | str,
    *,
    max_length: int = DEFAULT_MAX_WORD_LEN,
) -> Fraction:
    """Trace of the word's conditional expectation: an exact rational."""
    return b_trace(moment(cw, max_length=max_length))


def check_positivity(word: str, grid_size: int = 101) -> bool:
    """The expectation of a balanced word is a positive element: verify its
    polynomial is >= 0 on the uniform grid (exact rational comparisons)."""
    m = moment(word)
    return all(v >= 0 for v in eval_grid(m, grid_size))


def check_coeff_bound(cw: CoeffWord, grid_size: int = 257) -> bool:
    """Domination of a coefficiented word by the plain word.

    Pointwise on the grid, |E(word with coefficients)| must not exceed
    (prod of coefficient sup estimates) * E(plain word). Sup norms are
    estimated as the max of |b_j| over the same grid.
    """
    m_coeff = moment(cw)
    m_plain = moment(cw.word)
    bound = Fraction(1)
    for b in cw.coeffs:
        bound *= b.sup_grid(grid_size)
    lhs = eval_grid(m_coeff, grid_size)
    rhs = eval_grid(m_plain, grid_size)
    return all(abs(a) <= bound * r for a, r in zip(lhs, rhs))
