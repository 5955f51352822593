"""Exact arithmetic in the rational function field Q(q).

Values are stored as ``q**shift * num / den`` with ``num`` and ``den`` integer
polynomials (python-flint ``fmpz_poly``).  The representation is canonical:

* ``num`` has a nonzero constant term (the q-adic valuation lives in ``shift``);
* ``den`` has a nonzero constant term and a positive leading coefficient;
* ``num`` and ``den`` are coprime in Z[q], so the joint content is 1.

Zero is ``0/1`` with shift 0.  Since the form is unique, equality and hashing
are structural.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from flint import fmpz_poly

from .errors import DivisionByZero, InvalidArgument, PoleAtPoint, ZeroBase

__all__ = [
    "LaurentRat",
    "ZERO",
    "ONE",
    "Q",
    "qpow",
    "qint",
    "qbinom",
    "evaluate_at",
    "parse_laurent_rat",
]

_P_ONE = fmpz_poly([1])
_P_ZERO = fmpz_poly([])


def _valuation(p):
    t = 0
    while p[t] == 0:
        t += 1
    return t


class LaurentRat:
    """An element of Q(q) in canonical form.

    Construct from an ``int``, a ``Fraction`` or a mapping ``{exponent: coeff}``
    describing a Laurent polynomial.  Arithmetic accepts ints and Fractions on
    either side.
    """

    __slots__ = ("_shift", "_num", "_den", "_hash")

    def __init__(self, value=0):
        if isinstance(value, LaurentRat):
            self._set(value._shift, value._num, value._den)
            return
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            self._set(0, fmpz_poly([value]) if value else _P_ZERO, _P_ONE)
            return
        if isinstance(value, Fraction):
            num, den = value.numerator, value.denominator
            self._set(0, fmpz_poly([num]) if num else _P_ZERO, fmpz_poly([den]))
            return
        if isinstance(value, dict):
            other = LaurentRat.from_laurent(value)
            self._set(other._shift, other._num, other._den)
            return
        raise InvalidArgument(f"cannot build a LaurentRat from {value!r}")

    def _set(self, shift, num, den):
        self._shift = shift
        self._num = num
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, shift, num, den):
        obj = cls.__new__(cls)
        obj._shift = shift
        obj._num = num
        obj._den = den
        obj._hash = None
        return obj

    @classmethod
    def _make(cls, shift, num, den, reduce=True):
        """Bring ``q**shift * num / den`` (den(0) != 0) into canonical form."""
        if num.is_zero():
            return ZERO
        if num[0] == 0:
            t = _valuation(num)
            num = num.right_shift(t)
            shift += t
        if den.degree() == 0:
            d = int(den[0])
            if d == 1:
                return cls._raw(shift, num, den)
            reduce = True
        if reduce:
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
        if den.leading_coefficient() < 0:
            num = -num
            den = -den
        return cls._raw(shift, num, den)

    @classmethod
    def from_laurent(cls, coeffs):
        """Build from ``{exponent: integer coefficient}``."""
        items = [(e, int(c)) for e, c in coeffs.items() if c]
        if not items:
            return ZERO
        low = min(e for e, _ in items)
        top = max(e for e, _ in items)
        dense = [0] * (top - low + 1)
        for e, c in items:
            dense[e - low] += c
        return cls._make(low, fmpz_poly(dense), _P_ONE, reduce=False)

    @classmethod
    def from_parts(cls, num, den):
        """Build ``num/den`` from two ``{exponent: coeff}`` Laurent mappings."""
        a = cls.from_laurent(num)
        b = cls.from_laurent(den)
        return a / b

    @classmethod
    def monomial(cls, exponent, coeff=1):
        if not coeff:
            return ZERO
        return cls._raw(exponent, fmpz_poly([coeff]), _P_ONE)

    # ----------------------------------------------------------------- access

    @property
    def numerator(self):
        """Numerator as ``{exponent: int}`` with the q-power folded in."""
        return {
            self._shift + i: int(c)
            for i, c in enumerate(self._num.coeffs())
            if c != 0
        }

    @property
    def denominator(self):
        """Denominator as ``{exponent: int}`` (an ordinary polynomial)."""
        return {i: int(c) for i, c in enumerate(self._den.coeffs()) if c != 0}

    def is_zero(self):
        return self._num.is_zero()

    def is_laurent(self):
        """True when the denominator is 1."""
        return self._den.is_one()

    def is_monomial(self):
        return self._den.is_one() and self._num.degree() == 0

    def cost(self):
        """Rough size measure used when choosing elimination pivots."""
        return self._num.degree() + self._den.degree()

    # ------------------------------------------------------------- arithmetic

    def __add__(self, other):
        if not isinstance(other, LaurentRat):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if self._num.is_zero():
            return other
        if other._num.is_zero():
            return self
        s1, s2 = self._shift, other._shift
        shift = min(s1, s2)
        n1 = self._num.left_shift(s1 - shift) if s1 != shift else self._num
        n2 = other._num.left_shift(s2 - shift) if s2 != shift else other._num
        d1, d2 = self._den, other._den
        if d1.is_one() and d2.is_one():
            return LaurentRat._make(shift, n1 + n2, _P_ONE, reduce=False)
        if d1 == d2:
            return LaurentRat._make(shift, n1 + n2, d1)
        g = d1.gcd(d2)
        if g.is_one():
            return LaurentRat._make(shift, n1 * d2 + n2 * d1, d1 * d2)
        d1g = d1 / g
        d2g = d2 / g
        return LaurentRat._make(shift, n1 * d2g + n2 * d1g, d1 * d2g)

    __radd__ = __add__

    def __neg__(self):
        if self._num.is_zero():
            return self
        return LaurentRat._raw(self._shift, -self._num, self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, LaurentRat):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if not isinstance(other, LaurentRat):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if self._num.is_zero() or other._num.is_zero():
            return ZERO
        shift = self._shift + other._shift
        n1, d1, n2, d2 = self._num, self._den, other._num, other._den
        if d1.is_one() and d2.is_one():
            return LaurentRat._raw(shift, n1 * n2, _P_ONE)
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1 = n1 / g
                d2 = d2 / g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2 = n2 / g
                d1 = d1 / g
        num = n1 * n2
        den = d1 * d2
        if den.leading_coefficient() < 0:
            num = -num
            den = -den
        return LaurentRat._raw(shift, num, den)

    __rmul__ = __mul__

    def inv(self):
        if self._num.is_zero():
            raise DivisionByZero("inverse of zero in Q(q)")
        num, den = self._den, self._num
        if den.leading_coefficient() < 0:
            num = -num
            den = -den
        return LaurentRat._raw(-self._shift, num, den)

    def __truediv__(self, other):
        if not isinstance(other, LaurentRat):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        if self._den.is_one() and self._num.degree() == 0:
            return LaurentRat._raw(self._shift * n, self._num**n, _P_ONE)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ------------------------------------------------------------- comparison

    def __eq__(self, other):
        if not isinstance(other, LaurentRat):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return (
            self._shift == other._shift
            and self._num == other._num
            and self._den == other._den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (self._shift, tuple(int(c) for c in self._num.coeffs()),
                 tuple(int(c) for c in self._den.coeffs()))
            )
        return self._hash

    def __bool__(self):
        return not self._num.is_zero()

    # ---------------------------------------------------------------- display

    def __str__(self):
        return f"({_render(self.numerator)})/({_render(self.denominator)})"

    def __repr__(self):
        return f"LaurentRat('{self}')"


def _coerce(value):
    if isinstance(value, LaurentRat):
        return value
    if isinstance(value, (int, Fraction)):
        return LaurentRat(value)
    return None


def _render(coeffs):
    if not coeffs:
        return "0"
    parts = []
    for e in sorted(coeffs, reverse=True):
        c = coeffs[e]
        mag = abs(c)
        if e == 0:
            body = str(mag)
        elif mag == 1:
            body = f"q^{e}"
        else:
            body = f"{mag}*q^{e}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


_TERM = re.compile(r"([+-]?)\s*(\d+)?\s*(\*?\s*q\^(-?\d+))?")


def _parse_poly(text):
    text = text.strip()
    if text == "0":
        return {}
    coeffs = {}
    pos = 0
    text = text.replace(" ", "")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise InvalidArgument(f"malformed polynomial text {text!r}")
        sign, digits, qpart, exp = m.groups()
        if digits is None and qpart is None:
            raise InvalidArgument(f"malformed polynomial text {text!r}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        e = int(exp) if qpart else 0
        coeffs[e] = coeffs.get(e, 0) + c
        pos = m.end()
    return coeffs


def parse_laurent_rat(text):
    """Inverse of ``str(LaurentRat)``: parse ``(num)/(den)``."""
    m = re.fullmatch(r"\s*\((.*)\)\s*/\s*\((.*)\)\s*", text)
    if not m:
        raise InvalidArgument(f"not in wire format: {text!r}")
    return LaurentRat.from_parts(_parse_poly(m.group(1)), _parse_poly(m.group(2)))


ZERO = LaurentRat._raw(0, _P_ZERO, _P_ONE)
ONE = LaurentRat._raw(0, _P_ONE, _P_ONE)
Q = LaurentRat._raw(1, _P_ONE, _P_ONE)


@lru_cache(maxsize=4096)
def qpow(exponent):
    """The monomial ``q**exponent``."""
    return LaurentRat._raw(exponent, _P_ONE, _P_ONE)


@lru_cache(maxsize=4096)
def qint(n, power=1):
    """Symmetric q-integer ``[n]`` evaluated at ``q**power``."""
    if n == 0:
        return ZERO
    sign = 1 if n > 0 else -1
    m = abs(n)
    return LaurentRat.from_laurent(
        {power * (m - 1 - 2 * k): sign for k in range(m)}
    )


def qfactorial(n, power=1):
    result = ONE
    for k in range(1, n + 1):
        result = result * qint(k, power)
    return result


@lru_cache(maxsize=4096)
def qbinom(n, k, power=1):
    """Gaussian binomial ``[n choose k]`` at ``q**power`` (product formula)."""
    if not 0 <= k <= n:
        raise InvalidArgument(f"qbinom needs 0 <= k <= n, got n={n}, k={k}")
    num = ONE
    den = ONE
    for t in range(k):
        num = num * qint(n - t, power)
        den = den * qint(t + 1, power)
    return num / den


def _eval_poly(coeffs, x):
    total = Fraction(0)
    for c in reversed(coeffs):
        total = total * x + int(c)
    return total


def evaluate_at(x, q0):
    """Exact value of ``x`` at the rational point ``q = q0``."""
    q0 = Fraction(q0)
    if q0 == 0:
        raise ZeroBase("evaluation at q = 0 is not defined")
    x = _coerce(x)
    den = _eval_poly(x._den.coeffs(), q0)
    if den == 0:
        raise PoleAtPoint(f"{x} has a pole at q = {q0}")
    return q0**x._shift * _eval_poly(x._num.coeffs(), q0) / den
