from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wandering.errors import InvertZero, PrecisionExhausted, TermCapExceeded
from wandering.puiseux import PuiseuxNumber, T, get_window, int_pow, invert, window
from wandering.residue import get_field
from wandering.valgroup import ZERO, finite

from conftest import nonzero_series, series

F2 = get_field(2)


def num(*pairs, prec=None, f=F2):
    return PuiseuxNumber.from_terms(f, pairs, prec)


def test_add_examples():
    assert num((1, 1), (2, 1)) + num((1, 1)) == T(F2, 2)
    x = num((Fraction(1, 3), 1), (5, 1))
    assert x + PuiseuxNumber.zero(F2) == x
    s = num((0, 1), prec=5) + num((7, 1), prec=9)
    assert s == num((0, 1), prec=5)


def test_mul_invert_pow_examples():
    assert T(F2, -2) * T(F2, Fraction(127, 64)) == T(F2, Fraction(-1, 64))
    with window(10):
        inv = invert(1 + T(F2))
        assert inv.terms() == [(Fraction(j), 1) for j in range(10)]
        assert inv.prec == 10
    assert int_pow(1 + T(F2), 2) == 1 + T(F2, 2)


def test_monomial_examples():
    y = PuiseuxNumber.monomial(F2, Fraction(127, 64))
    assert y.val() == Fraction(127, 64) and y.prec == Fraction(127, 64) + get_window()
    assert PuiseuxNumber.monomial(F2, 0, prec=None) == PuiseuxNumber.one(F2)
    assert T(F2, -2).abs() == finite(-2)


def test_abs_examples():
    assert (T(F2, -2) + 1).abs() == finite(-2)
    assert PuiseuxNumber.zero(F2).abs() == ZERO
    x = num((1, 1), prec=6)
    d = (x - x).abs()
    assert d.zero_to_precision and d.floor == 6


def test_invert_zero():
    with pytest.raises(InvertZero):
        invert(PuiseuxNumber.zero(F2))
    with pytest.raises(PrecisionExhausted):
        invert(PuiseuxNumber.zero(F2, prec=3))


def test_window_truncates_relative_to_valuation():
    with window(4):
        x = (T(F2, -10) + 1) * (1 + T(F2, 1))
        assert x.prec == -6
        assert x.val() == -10


def test_term_cap():
    x = PuiseuxNumber.from_terms(F2, [(Fraction(j, 7), 1) for j in range(200)])
    with window(1000, term_cap=300):
        with pytest.raises(TermCapExceeded):
            x * (x + T(F2, Fraction(1, 11)))


def test_frobenius_and_root():
    x = num((Fraction(1, 3), 1), (2, 1))
    assert x.frobenius() == x * x
    assert x.frobenius().pth_root() == x
    f3 = get_field(3)
    y = PuiseuxNumber.from_terms(f3, [(Fraction(1, 2), 2), (1, 1)])
    assert y.frobenius() == y * y * y


def test_json_roundtrip_bit_exact():
    f = get_field(3, 2)
    x = PuiseuxNumber.from_terms(f, [(Fraction(-1, 9), 4), (Fraction(5, 3), 8)], Fraction(7))
    assert PuiseuxNumber.from_json(x.to_json(), f) == x
    with pytest.raises(ValueError):
        PuiseuxNumber.from_json({"precision": {"num": 1, "den": 1},
                                 "terms": [[{"num": 2, "den": 1}, [1, 0]]]}, f)


@given(nonzero_series(), nonzero_series())
def test_ultrametric(x, y):
    s = x + y
    if x.val() != y.val():
        assert s.val() == min(x.val(), y.val())
    elif not s.is_zero:
        assert s.val() >= x.val()


@given(nonzero_series(exact=False), nonzero_series(exact=False))
def test_multiplicative(x, y):
    assert (x * y).val() == x.val() + y.val()


@given(series(max_terms=4), series(max_terms=4), series(max_terms=4))
def test_ring_axioms(x, y, z):
    with window(10 ** 6):
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x


@given(nonzero_series(p=3, exact=False))
def test_inverse_times_self(x):
    e = x * invert(x) - 1
    assert e.is_zero or e.val() > 0
    assert e.val_floor() >= min(get_window(), x.relative_precision() or get_window()) - 1


@given(series(), st.fractions(min_value=-2, max_value=6, max_denominator=6))
def test_truncate_never_raises_precision(x, cut):
    y = x.truncate(cut)
    assert y.prec == cut if x.prec is None else y.prec == min(cut, x.prec)
    assert all(e < y.prec for e, _ in y.terms())
