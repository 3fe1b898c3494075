"""Exact integer and rational arithmetic used as ground truth everywhere else.

Integers are returned as ``gmpy2.mpz`` (they compare and hash like ``int``);
rationals are :class:`fractions.Fraction`, which is always kept in lowest
terms with a positive denominator.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2
from gmpy2 import mpz

Natural = mpz
Rational = Fraction
IntLike = Union[int, mpz]


class DomainError(ValueError):
    """A parameter lies outside the domain of an operation or hypothesis."""


def _natural(x: IntLike, name: str) -> mpz:
    if isinstance(x, bool) or not isinstance(x, (int, type(mpz(0)))):
        raise TypeError(f"{name} must be an integer, got {type(x).__name__}")
    if x < 0:
        raise DomainError(f"{name} must be nonnegative, got {x}")
    return mpz(x)


def binomial(n: IntLike, k: IntLike) -> mpz:
    """Exact C(n, k); raises :class:`DomainError` when ``k > n``."""
    n = _natural(n, "n")
    k = _natural(k, "k")
    if k > n:
        raise DomainError(f"binomial requires k <= n, got n={n}, k={k}")
    return gmpy2.comb(n, k)


def factorial(n: IntLike) -> mpz:
    return gmpy2.fac(_natural(n, "n"))


def ipow(base: IntLike, exp: IntLike, *, zero_pow_zero: bool = False) -> mpz:
    """Exact ``base ** exp``.

    ``0 ** 0`` is rejected unless ``zero_pow_zero`` opts into the value 1,
    which is the convention needed at the endpoints k = 0 and k = n of
    ``k**k * (n-k)**(n-k)``.
    """
    base = _natural(base, "base")
    exp = _natural(exp, "exp")
    if base == 0 and exp == 0 and not zero_pow_zero:
        raise DomainError("0**0 is undefined without zero_pow_zero=True")
    return base**exp


@lru_cache(maxsize=8192)
def self_power(k: int) -> mpz:
    """``k ** k`` with ``0 ** 0 = 1``; cached since sweeps reuse every value."""
    return ipow(k, k, zero_pow_zero=True)


def compare_rational(a: Fraction | IntLike, b: Fraction | IntLike) -> int:
    """Three-way exact comparison: -1 if a < b, 0 if equal, 1 if a > b."""
    a = Fraction(a)
    b = Fraction(b)
    lhs = mpz(a.numerator) * b.denominator
    rhs = mpz(b.numerator) * a.denominator
    return (lhs > rhs) - (lhs < rhs)
