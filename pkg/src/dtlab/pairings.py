"""Independent oracle for scalar word moments via non-crossing pairings.

Deliberately shares no code with the recursive engine in ``cumulants``: words
are expanded into explicit non-crossing pairings (each pair joining a starred
and an unstarred letter), every pairing is evaluated as a nested iterated
integral of the constant 1, the pairing values are summed, and the sum is
integrated over [0,1]. Polynomials here are plain coefficient lists of
Fractions with their own little integration helpers.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ConfigError

_MAX_LEN = 16

Poly = list[Fraction]  # coefficient list, constant term first

_ONE: Poly = [Fraction(1)]


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _int_0_to_x(a: Poly) -> Poly:
    return [Fraction(0)] + [c / (k + 1) for k, c in enumerate(a)]


def _int_x_to_1(a: Poly) -> Poly:
    prim = _int_0_to_x(a)
    at_one = sum(prim, Fraction(0))
    out = [-c for c in prim]
    out[0] += at_one
    return out


def _int_0_to_1(a: Poly) -> Fraction:
    return sum(_int_0_to_x(a), Fraction(0))


def noncrossing_pairings(word: str) -> list[tuple[tuple[int, int], ...]]:
    """All non-crossing perfect pairings of the word's positions in which
    every pair joins two letters of opposite type. Empty word: one empty
    pairing. Odd or unpairable words: no pairings."""
    n = len(word)

    def rec(lo: int, hi: int) -> list[list[tuple[int, int]]]:
        if lo == hi:
            return [[]]
        out: list[list[tuple[int, int]]] = []
        # position lo pairs with some j of opposite letter; both enclosed
        # segments must be evenly pairable on their own.
        for j in range(lo + 1, hi, 2):
            if word[j] == word[lo]:
                continue
            for inner in rec(lo + 1, j):
                for outer in rec(j + 1, hi):
                    out.append([(lo, j)] + inner + outer)
        return out

    return [tuple(sorted(p)) for p in rec(0, n)]


def _pairing_value(word: str, pairing: tuple[tuple[int, int], ...]) -> Poly:
    """Evaluate one pairing as a nested iterated integral of 1.

    A pair applies the integral from 0 to x when it opens with a starred
    letter and the integral from x to 1 otherwise; its integrand is the
    product of the values of the pairs nested directly inside it. Values of
    outermost pairs multiply.
    """
    children: dict[tuple[int, int], list[tuple[int, int]]] = {p: [] for p in pairing}
    roots: list[tuple[int, int]] = []
    stack: list[tuple[int, int]] = []
    for p in pairing:  # openers in increasing order
        while stack and p[0] > stack[-1][1]:
            stack.pop()
        if stack:
            children[stack[-1]].append(p)
        else:
            roots.append(p)
        stack.append(p)

    def value(p: tuple[int, int]) -> Poly:
        integrand = _ONE
        for q in children[p]:
            integrand = _poly_mul(integrand, value(q))
        if word[p[0]] == "*":
            return _int_0_to_x(integrand)
        return _int_x_to_1(integrand)

    out = _ONE
    for p in roots:
        out = _poly_mul(out, value(p))
    return out


def pairing_oracle(word: str, *, max_length: int = _MAX_LEN) -> Fraction:
    """Scalar moment of a plain word: sum of all non-crossing pairing values,
    integrated over [0,1]. Exact rational."""
    if any(ch not in "*1" for ch in word):
        raise ConfigError(
            "pairings.word", f"a word is a string over {{'*','1'}}, got {word!r}"
        )
    if len(word) > max_length:
        raise ConfigError(
            "pairings.word_cap",
            f"word of length {len(word)} exceeds the cap {max_length}; "
            f"pass max_length explicitly to override",
        )
    total: Poly = [Fraction(0)]
    for pairing in noncrossing_pairings(word):
        val = _pairing_value(word, pairing)
        grown = [Fraction(0)] * max(len(total), len(val))
        for k, c in enumerate(total):
            grown[k] += c
        for k, c in enumerate(val):
            grown[k] += c
        total = grown
    return _int_0_to_1(total)
