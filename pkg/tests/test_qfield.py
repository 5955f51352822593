from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qflag.errors import DivisionByZero, InvalidArgument, PoleAtPoint, ZeroBase
from qflag.qfield import (
    ONE,
    Q,
    ZERO,
    LaurentRat,
    evaluate_at,
    parse_laurent_rat,
    qbinom,
    qint,
    qpow,
)

POINTS = [Fraction(2), Fraction(-3, 5), Fraction(7, 4)]

laurent = st.dictionaries(
    st.integers(-4, 4), st.integers(-5, 5), max_size=4
).map(LaurentRat.from_laurent)
nonzero = laurent.filter(bool)
elements = st.builds(lambda a, b: a / b, laurent, nonzero)


def values(x):
    out = []
    for p in POINTS:
        try:
            out.append(evaluate_at(x, p))
        except PoleAtPoint:
            out.append(None)
    return out


@given(elements, elements, elements)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a
    assert a - a == ZERO


@given(nonzero, elements)
def test_division_inverts_multiplication(a, b):
    assert a * a.inv() == ONE
    assert (b / a) * a == b


@given(elements, elements)
def test_evaluation_is_a_homomorphism(a, b):
    # oracle: plain Fraction arithmetic at several rational points
    for p, va, vb, vs, vp in zip(POINTS, values(a), values(b), values(a + b), values(a * b)):
        if None in (va, vb):
            continue
        assert vs == va + vb
        assert vp == va * vb


@given(elements)
def test_canonical_form_invariants(a):
    den = a.denominator
    assert den[min(den)] != 0 and min(den) == 0
    assert den[max(den)] > 0
    assert hash(a) == hash(LaurentRat(a))


@given(elements)
def test_wire_format_round_trip(a):
    assert parse_laurent_rat(str(a)) == a


def test_wire_format_examples():
    x = qpow(2) - qpow(-2)
    assert str(x) == "(q^2 - q^-2)/(1)"
    assert str(ZERO) == "(0)/(1)"
    assert str(LaurentRat(Fraction(1, 2))) == "(1)/(2)"
    assert str(Q) == "(q^1)/(1)"


def test_zero_division_and_bad_points():
    with pytest.raises(DivisionByZero):
        ONE / ZERO
    with pytest.raises(ZeroBase):
        evaluate_at(ONE, 0)
    with pytest.raises(PoleAtPoint):
        evaluate_at(ONE / (Q - 1), 1)


def q_pascal(n, k):
    """Gaussian binomial from the recurrence [n,k] = q^k [n-1,k] + q^{k-n} [n-1,k-1]
    in the symmetric normalization."""
    if k in (0, n):
        return ONE
    return qpow(k) * q_pascal(n - 1, k) + qpow(k - n) * q_pascal(n - 1, k - 1)


@pytest.mark.parametrize("n", range(0, 7))
def test_qbinom_matches_recurrence(n):
    for k in range(n + 1):
        assert qbinom(n, k) == q_pascal(n, k)
        assert evaluate_at(qbinom(n, k), 1) == Fraction(__import__("math").comb(n, k))


def test_qint_values():
    assert qint(3) == qpow(2) + ONE + qpow(-2)
    assert qint(-2) == -qint(2)
    assert qint(2, power=3) == qpow(3) + qpow(-3)
    assert evaluate_at(qint(5), 1) == 5


def test_qbinom_rejects_out_of_range():
    with pytest.raises(InvalidArgument):
        qbinom(2, 3)
