"""Exact polynomial algebra over C[0,1] with the two one-sided integral kernels.

Elements of the coefficient algebra are polynomials with rational coefficients,
represented exactly with :class:`fractions.Fraction`. The two kernel maps

    (alpha12 f)(x) = integral of f over [x, 1]
    (alpha21 f)(x) = integral of f over [0, x]

send polynomials to polynomials, so the whole moment calculus downstream stays
inside exact rational arithmetic. ``trace`` is integration over [0,1] against
Lebesgue measure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ConfigError

RationalLike = Fraction | int | str


def _as_fraction(v: RationalLike) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    raise ConfigError("bpoly.coefficient", f"not an exact rational: {v!r}")


def _canonical(coeffs: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    out = [_as_fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class BElem:
    """A polynomial sum(coeffs[k] * x**k) with exact rational coefficients.

    The representation is canonical: trailing zero coefficients are stripped,
    and the zero polynomial is the empty tuple. Instances are immutable and
    hashable, which the moment engine relies on for memoization.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _canonical(self.coeffs))

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero() -> "BElem":
        return BElem(())

    @staticmethod
    def one() -> "BElem":
        return BElem((Fraction(1),))

    @staticmethod
    def x() -> "BElem":
        return BElem((Fraction(0), Fraction(1)))

    @staticmethod
    def constant(v: RationalLike) -> "BElem":
        return BElem((_as_fraction(v),))

    # -- ring structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree of the polynomial; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "BElem") -> "BElem":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return BElem(
            tuple(
                (a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0)
                for k in range(n)
            )
        )

    def __neg__(self) -> "BElem":
        return BElem(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "BElem") -> "BElem":
        return self + (-other)

    def __mul__(self, other: "BElem | RationalLike") -> "BElem":
        if not isinstance(other, BElem):
            s = _as_fraction(other)
            return BElem(tuple(c * s for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return BElem.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return BElem(tuple(out))

    __rmul__ = __mul__

    def __call__(self, x: RationalLike) -> Fraction:
        """Evaluate exactly at a rational point (Horner)."""
        xf = _as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * xf + c
        return acc

    def sup_grid(self, grid_size: int = 257) -> Fraction:
        """max |self| over the uniform grid; documented stand-in for the sup norm."""
        return max(
            (abs(v) for v in eval_grid(self, grid_size)), default=Fraction(0)
        )

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        if self.is_zero():
            return "BElem(0)"
        terms = [f"{c}*x^{k}" if k else f"{c}" for k, c in enumerate(self.coeffs) if c]
        return "BElem(" + " + ".join(terms) + ")"


def _antiderivative(f: BElem) -> BElem:
    """The antiderivative F with F(0) = 0."""
    return BElem(
        (Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(f.coeffs))
    )


def alpha12(f: BElem) -> BElem:
    """Integral of f over [x, 1], as a polynomial in x.

    This is the kernel attached to words that open with an unstarred letter.
    alpha12(1) = 1 - x.
    """
    F = _antiderivative(f)
    return BElem.constant(F(1)) - F


def alpha21(f: BElem) -> BElem:
    """Integral of f over [0, x], as a polynomial in x.

    Kernel attached to words opening with a starred letter. alpha21(1) = x.
    """
    return _antiderivative(f)


def trace(f: BElem) -> Fraction:
    """Integral of f over [0, 1] (the trace on the diagonal algebra)."""
    return _antiderivative(f)(1)


def eval_grid(f: BElem, grid_size: int) -> list[Fraction]:
    """Exact values of f at the uniform grid j/(grid_size-1), j = 0..grid_size-1."""
    if grid_size < 2:
        raise ConfigError("bpoly.grid", f"grid_size must be >= 2, got {grid_size}")
    den = grid_size - 1
    return [f(Fraction(j, den)) for j in range(grid_size)]


# -- serialization ---------------------------------------------------------
#
# A BElem is serialized as a JSON array of coefficient strings "p/q" in lowest
# terms with the sign on the numerator, constant term first.


def _fraction_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def to_json_obj(f: BElem) -> list[str]:
    return [_fraction_str(c) for c in f.coeffs]


def from_json_obj(obj: Sequence[str]) -> BElem:
    if not isinstance(obj, (list, tuple)):
        raise ConfigError("bpoly.json", f"expected a JSON array, got {type(obj).__name__}")
    try:
        return BElem(tuple(Fraction(str(c)) for c in obj))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError("bpoly.json", f"bad coefficient in {obj!r}: {exc}") from exc


def dumps(f: BElem) -> str:
    return json.dumps(to_json_obj(f))


def loads(s: str) -> BElem:
    return from_json_obj(json.loads(s))
