"""Exact polynomial layer: ring operations, kernel maps, trace, serialization."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dtlab.bpoly import (
    BElem,
    alpha12,
    alpha21,
    dumps,
    eval_grid,
    from_json_obj,
    loads,
    to_json_obj,
    trace,
)
from dtlab.errors import ConfigError

rationals = st.fractions(
    min_value=-100, max_value=100, max_denominator=50
)
belems = st.lists(rationals, max_size=6).map(lambda cs: BElem(tuple(cs)))


def test_canonical_form_strips_trailing_zeros():
    f = BElem((1, 2, 0, 0))
    assert f.coeffs == (Fraction(1), Fraction(2))
    assert BElem((0, 0)).is_zero
    assert BElem(()).degree == -1


def test_constructors():
    assert BElem.zero().is_zero
    assert BElem.one()(Fraction(1, 3)) == 1
    assert BElem.x()(Fraction(2, 7)) == Fraction(2, 7)
    assert BElem.constant("3/4").coeffs == (Fraction(3, 4),)


def test_arithmetic_known_values():
    x = BElem.x()
    f = (x + BElem.one()) * (x - BElem.one())  # x^2 - 1
    assert f.coeffs == (Fraction(-1), Fraction(0), Fraction(1))
    assert f(Fraction(3)) == 8
    assert (2 * x).coeffs == (Fraction(0), Fraction(2))
    assert (x * Fraction(1, 2))(Fraction(1)) == Fraction(1, 2)


@given(belems, belems, belems)
def test_ring_laws(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert f - f == BElem.zero()


@given(belems, rationals)
def test_evaluation_is_ring_homomorphism(f, v):
    g = f * f + 3 * f
    assert g(v) == f(v) * f(v) + 3 * f(v)


def test_kernels_on_one():
    one = BElem.one()
    # integrating 1 from x to 1 gives 1-x; from 0 to x gives x
    assert alpha12(one) == BElem((1, -1))
    assert alpha21(one) == BElem.x()
    assert trace(alpha12(one)) == Fraction(1, 2)
    assert trace(alpha21(one)) == Fraction(1, 2)


def test_kernels_on_x():
    x = BElem.x()
    assert alpha21(x) == BElem((0, 0, Fraction(1, 2)))
    assert alpha12(x) == BElem((Fraction(1, 2), 0, Fraction(-1, 2)))


@given(belems)
def test_kernels_split_the_trace(f):
    # int_x^1 f + int_0^x f = int_0^1 f, a constant
    total = alpha12(f) + alpha21(f)
    assert total == BElem.constant(trace(f))


@given(belems, belems)
def test_kernels_and_trace_are_linear(f, g):
    assert alpha12(f + g) == alpha12(f) + alpha12(g)
    assert alpha21(f + g) == alpha21(f) + alpha21(g)
    assert trace(f + g) == trace(f) + trace(g)


def test_eval_grid_endpoints_and_size():
    f = BElem.x()
    vals = eval_grid(f, 5)
    assert vals == [Fraction(j, 4) for j in range(5)]
    with pytest.raises(ConfigError):
        eval_grid(f, 1)


def test_sup_grid():
    f = BElem((0, -1))  # -x, sup of |f| on [0,1] is 1
    assert f.sup_grid(11) == 1


@given(belems)
def test_json_round_trip(f):
    assert from_json_obj(to_json_obj(f)) == f
    assert loads(dumps(f)) == f


def test_json_accepts_bare_integers():
    assert from_json_obj(["2", "-1/3"]) == BElem((2, Fraction(-1, 3)))
