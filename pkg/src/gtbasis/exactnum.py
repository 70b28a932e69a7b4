"""Exact arithmetic in the ring Q[sqrt(r) : r squarefree].

Every coefficient produced by the basis construction lives in the real
subfield generated over Q by square roots of (small) positive integers.
An AlgebraicValue is a finite sum  sum_r  q_r * sqrt(r)  with rational q_r
and squarefree positive integer radicands r; the radicand 1 carries the
rational part.  All operations are exact; nothing here ever rounds.

Floats only appear in to_float(), which is a convenience for reporting and
for the lossy matrix exports.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

Rational = Fraction
RationalLike = Union[int, Fraction]


@lru_cache(maxsize=None)
def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return (s, f) with n = s**2 * f and f squarefree, for n >= 1.

    Trial division; radicands occurring in matrix elements are tiny
    (products of pattern entries), so nothing faster is warranted.
    """
    if n < 1:
        raise ValueError(f"squarefree_decomposition needs n >= 1, got {n}")
    s, f = 1, 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            s *= d ** (e // 2)
            if e % 2:
                f *= d
        d += 1 if d == 2 else 2
    return s, f * n


class AlgebraicValue:
    """Exact element of Q[sqrt(2), sqrt(3), sqrt(5), ...].

    Internally a map {squarefree radicand: rational coefficient} with no
    zero coefficients stored.  Immutable; hashable; arithmetic returns new
    objects.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[RationalLike, "AlgebraicValue", dict, None] = None):
        if terms is None:
            self._terms: dict[int, Fraction] = {}
        elif isinstance(terms, AlgebraicValue):
            self._terms = dict(terms._terms)
        elif isinstance(terms, (int, Fraction)):
            q = Fraction(terms)
            self._terms = {1: q} if q else {}
        elif isinstance(terms, dict):
            clean = {}
            for rad, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff:
                    s, f = squarefree_decomposition(int(rad))
                    clean[f] = clean.get(f, Fraction(0)) + coeff * s
            self._terms = {r: c for r, c in clean.items() if c}
        else:
            raise TypeError(f"cannot build AlgebraicValue from {type(terms).__name__}")

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return set(self._terms) <= {1}

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms.get(1, Fraction(0))

    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def to_float(self) -> float:
        return sum(float(c) * math.sqrt(r) for r, c in self._terms.items())

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "AlgebraicValue":
        if isinstance(other, AlgebraicValue):
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicValue(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for r, c in other._terms.items():
            s = out.get(r, Fraction(0)) + c
            if s:
                out[r] = s
            else:
                out.pop(r, None)
        res = AlgebraicValue()
        res._terms = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = AlgebraicValue()
        res._terms = {r: -c for r, c in self._terms.items()}
        return res

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for r1, c1 in self._terms.items():
            for r2, c2 in other._terms.items():
                g = math.gcd(r1, r2)
                rad = (r1 // g) * (r2 // g)
                coeff = c1 * c2 * g
                s = out.get(rad, Fraction(0)) + coeff
                if s:
                    out[rad] = s
                else:
                    out.pop(rad, None)
        res = AlgebraicValue()
        res._terms = out
        return res

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division of AlgebraicValue by zero")
        if len(other._terms) != 1:
            # General inversion (rationalizing multi-term denominators) is
            # never needed by the construction; keep the ring honest.
            raise ValueError(f"can only divide by single-term values, not {other}")
        (rad, coeff), = other._terms.items()
        # 1/(c sqrt(r)) = sqrt(r)/(c r)
        inv = AlgebraicValue({rad: Fraction(1) / (coeff * rad)})
        return self * inv

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    # -- comparisons / hashing -------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    # -- serialization ----------------------------------------------------

    def serialize(self) -> list[list[int]]:
        """Canonical JSON form: [[numerator, denominator, radicand], ...]
        sorted by radicand."""
        return [
            [c.numerator, c.denominator, r]
            for r, c in sorted(self._terms.items(), key=lambda kv: kv[0])
        ]

    @classmethod
    def deserialize(cls, data: Iterable[Iterable[int]]) -> "AlgebraicValue":
        out = cls()
        for num, den, rad in data:
            out = out + cls({int(rad): Fraction(int(num), int(den))})
        return out

    def __repr__(self):
        return f"AlgebraicValue({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for r, c in sorted(self._terms.items()):
            if r == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({r})")
            elif c == -1:
                parts.append(f"-sqrt({r})")
            else:
                parts.append(f"{c}*sqrt({r})")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


ZERO = AlgebraicValue()
ONE = AlgebraicValue(1)


def sqrt_of(q: Union[RationalLike, AlgebraicValue]) -> AlgebraicValue:
    """Exact square root of a nonnegative rational.

    sqrt_of(8) = 2*sqrt(2), sqrt_of(4/9) = 2/3, sqrt_of(0) = 0.
    A negative argument is a domain error: in the construction every
    radicand is a product of interlacing gaps, so a negative one always
    means a selection-rule bug upstream, never a complex value.
    """
    if isinstance(q, AlgebraicValue):
        q = q.as_rational()
    q = Fraction(q)
    if q < 0:
        raise ValueError(f"sqrt_of: negative radicand {q}")
    if q == 0:
        return AlgebraicValue()
    # sqrt(p/q) = sqrt(p*q)/q keeps everything over integer radicands
    p = q.numerator * q.denominator
    s, f = squarefree_decomposition(p)
    return AlgebraicValue({f: Fraction(s, q.denominator)})


def signum_and_square(a: Union[RationalLike, AlgebraicValue]) -> tuple[int, Fraction]:
    """(sign, a**2) for a single-term value; (0, 0) for zero.

    signum_and_square(-3*sqrt(2)) == (-1, 18).  Multi-term values have no
    single radicand to report; asking for one is an error.
    """
    a = AlgebraicValue(a) if not isinstance(a, AlgebraicValue) else a
    if a.is_zero():
        return 0, Fraction(0)
    if len(a._terms) != 1:
        raise ValueError(f"signum_and_square needs a single-term value, got {a}")
    (rad, coeff), = a._terms.items()
    return (1 if coeff > 0 else -1), coeff * coeff * rad
