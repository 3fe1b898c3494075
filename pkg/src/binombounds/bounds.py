"""Bound evaluators and single-point inequality checks.

Every check returns a :class:`~binombounds.rigor.Verdict`. Bounds whose only
irrational content is a half-integer power are decided in exact integer
arithmetic by clearing denominators and squaring ("exact" mode); anything
involving e or pi goes through :func:`~binombounds.rigor.adaptive_compare`
("interval" mode). Exact-capable bounds also expose an interval path so the
two can be cross-checked.

Out-of-hypothesis parameters raise :class:`DomainError`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from gmpy2 import mpz

from . import rigor
from .exactnum import DomainError, binomial, factorial, self_power
from .rigor import (
    DEFAULT_CAP_BITS,
    Interval,
    Verdict,
    adaptive_compare,
    combine,
    exact_verdict,
    pi,
)

EXACT = "exact"
INTERVAL = "interval"


class BoundId(str, enum.Enum):
    ROBBINS_LOWER = "robbins_lower"
    ROBBINS_UPPER = "robbins_upper"
    EQ12_UPPER = "eq12_upper"
    HIRSCHHORN_LOWER = "hirschhorn_lower"
    HIRSCHHORN_UPPER = "hirschhorn_upper"
    HIRSCHHORN_REMAINDER = "hirschhorn_remainder"
    STANICA_LOWER = "stanica_lower"
    STANICA_UPPER = "stanica_upper"
    STANICA_LOWER_PRINTED = "stanica_lower_printed"
    STANICA_UPPER_PRINTED = "stanica_upper_printed"
    THM21_RATIONAL = "thm21_rational"
    THM21_EXP = "thm21_exp"
    THM22 = "thm22"
    THM22_WEAK = "thm22_weak"
    THM23 = "thm23"
    THM24_RATIONAL = "thm24_rational"
    THM24_EXP = "thm24_exp"
    THM24_POW2 = "thm24_pow2"
    COROLLARY21 = "corollary21"
    LEMMA21_RATIO = "lemma21_ratio"
    LEMMA22 = "lemma22"
    LEMMA23 = "lemma23"
    INEQ21 = "ineq21"
    INEQ23 = "ineq23"
    INEQ25 = "ineq25"
    INEQ26 = "ineq26"
    INEQ27 = "ineq27"
    INEQ28 = "ineq28"


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


def _I(x, prec: int) -> Interval:
    return Interval.exact(x, prec)


def _mode(mode: Optional[str], exact_ok: bool) -> str:
    if mode is None:
        return EXACT if exact_ok else INTERVAL
    if mode not in (EXACT, INTERVAL):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == EXACT and not exact_ok:
        raise DomainError("this bound involves e or pi and has no exact path")
    return mode


def _kk(n: int, k: int) -> mpz:
    """k^k (n-k)^(n-k) with 0^0 = 1."""
    return self_power(k) * self_power(n - k)


# ---------------------------------------------------------------------------
# Bound evaluators (enclosures at a given precision)
# ---------------------------------------------------------------------------


def _stirling(n: int, prec: int) -> Interval:
    """sqrt(2 pi n) (n/e)^n."""
    return rigor.sqrt(pi(prec) * (2 * n)) * _I(self_power(n), prec) * rigor.exp(_I(-n, prec))


def robbins_bounds(n: int, prec: int = 128) -> tuple[Interval, Interval]:
    """Robbins/Feller enclosures of n! from below and above."""
    _require(n >= 1, "Robbins bounds need n >= 1")
    core = _stirling(n, prec)
    lower = core * rigor.exp(_I(Fraction(1, 12 * n + 1), prec))
    upper = core * rigor.exp(_I(Fraction(1, 12 * n), prec))
    return lower, upper


def eq12_upper(m: int, n: int, prec: int = 128) -> Interval:
    """sqrt(m / (2 pi (m-1) n)) * (m^m / (m-1)^(m-1))^n, an upper bound for C(mn, n)."""
    _require(m >= 2 and n >= 1, "eq12 needs m >= 2 and n >= 1")
    root = rigor.sqrt(_I(Fraction(m, 2 * (m - 1) * n), prec) / pi(prec))
    power = _I(Fraction(mpz(m) ** (m * n), mpz(m - 1) ** ((m - 1) * n)), prec)
    return root * power


def hirschhorn_bounds(n: int, prec: int = 256) -> tuple[Interval, Interval, Interval]:
    """Lower and upper enclosures of n!, and the remainder r with 5 < r < 11."""
    _require(n >= 2, "Hirschhorn bounds need n >= 2")
    cubic = 8 * n**3 + 4 * n**2 + n
    base = rigor.sqrt(pi(prec)) * _I(self_power(n), prec) * rigor.exp(_I(-n, prec))
    lower = base * rigor.rootn(_I(cubic, prec), 6)
    upper = base * rigor.rootn(_I(Fraction(30 * cubic + 1, 30), prec), 6)
    scaled = _I(factorial(n), prec) * rigor.exp(_I(n, prec)) / _I(self_power(n), prec)
    sixth = rigor.pow_int(scaled, 6) / rigor.pow_int(pi(prec), 3)
    poly = Fraction(cubic) + Fraction(1, 30) - Fraction(11, 240 * n)
    r_n = (sixth - _I(poly, prec)) * (240 * n * n)
    return lower, upper, r_n


def stanica_bounds(m: int, p: int, n: int, prec: int = 128, form: str = "classical") -> tuple[Interval, Interval]:
    """Two-sided enclosure bounds for C(mn, pn).

    ``form="classical"`` includes the p^p factor in the power base;
    ``form="printed"`` uses m^m / (m-p)^(m-p).
    """
    _require(m > p >= 1 and n >= 1, "Stanica bounds need m > p >= 1 and n >= 1")
    if form not in ("classical", "printed"):
        raise ValueError(f"unknown form {form!r}")
    den = mpz(m - p) ** ((m - p) * n)
    if form == "classical":
        den *= mpz(p) ** (p * n)
    root = rigor.sqrt(_I(Fraction(m, 2 * p * (m - p) * n), prec) / pi(prec))
    upper = root * _I(Fraction(mpz(m) ** (m * n), den), prec)
    lower = rigor.exp(_I(Fraction(-1, 8 * n), prec)) * upper
    return lower, upper


@lru_cache(maxsize=512)
def thm22_bound(n: int, prec: int = 128) -> Interval:
    """sqrt(2/pi) * 2^n / sqrt(n)."""
    _require(n >= 1, "thm22 needs n >= 1")
    return rigor.sqrt(_I(Fraction(2 * mpz(4) ** n, n), prec) / pi(prec))


@lru_cache(maxsize=512)
def thm23_bound(m: int, n: int, prec: int = 128) -> Interval:
    """m / sqrt(2 pi (m-1) n) * (m / (m-1)^((m-1)/m))^n."""
    _require(m >= 2 and n >= 1, "thm23 bound needs m >= 2 and n >= 1")
    num = _I(mpz(m) ** (n + 1), prec)
    den = rigor.sqrt(pi(prec) * (2 * (m - 1) * n)) * rigor.rootn(_I(mpz(m - 1) ** (n * (m - 1)), prec), m)
    return num / den


# ---------------------------------------------------------------------------
# Classical bounds
# ---------------------------------------------------------------------------


def robbins_lower_check(n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    _mode(mode, False)
    _require(n >= 1, "Robbins bounds need n >= 1")
    return adaptive_compare(lambda p: robbins_bounds(n, p)[0], factorial(n), "<", cap_bits, witness=(n,))


def robbins_upper_check(n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    _mode(mode, False)
    _require(n >= 1, "Robbins bounds need n >= 1")
    return adaptive_compare(factorial(n), lambda p: robbins_bounds(n, p)[1], "<", cap_bits, witness=(n,))


def eq12_check(m, n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    _mode(mode, False)
    _require(m >= 2 and n >= 1, "eq12 needs m >= 2 and n >= 1")
    return adaptive_compare(binomial(m * n, n), lambda p: eq12_upper(m, n, p), "<", cap_bits, witness=(m, n))


def hirschhorn_lower_check(n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    _mode(mode, False)
    _require(n >= 2, "Hirschhorn bounds need n >= 2")
    return adaptive_compare(lambda p: hirschhorn_bounds(n, p)[0], factorial(n), "<", cap_bits, witness=(n,))


def hirschhorn_upper_check(n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    _mode(mode, False)
    _require(n >= 2, "Hirschhorn bounds need n >= 2")
    return adaptive_compare(factorial(n), lambda p: hirschhorn_bounds(n, p)[1], "<", cap_bits, witness=(n,))


def hirschhorn_remainder_check(n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """5 < r(n) < 11."""
    _mode(mode, False)
    _require(n >= 2, "Hirschhorn bounds need n >= 2")
    r_n = lambda p: hirschhorn_bounds(n, p)[2]  # noqa: E731
    return combine(
        adaptive_compare(5, r_n, "<", cap_bits, witness=(n,)),
        adaptive_compare(r_n, 11, "<", cap_bits, witness=(n,)),
    )


def _stanica(m, p, n, side, form, cap_bits):
    _require(m > p >= 1 and n >= 1, "Stanica bounds need m > p >= 1 and n >= 1")
    c = binomial(m * n, p * n)
    if side == "lower":
        return adaptive_compare(lambda b: stanica_bounds(m, p, n, b, form)[0], c, "<", cap_bits, witness=(m, p, n))
    return adaptive_compare(c, lambda b: stanica_bounds(m, p, n, b, form)[1], "<", cap_bits, witness=(m, p, n))


def stanica_check(m, p, n, side="both", form="classical", *, cap_bits=DEFAULT_CAP_BITS) -> Verdict:
    if side == "both":
        return combine(_stanica(m, p, n, "lower", form, cap_bits), _stanica(m, p, n, "upper", form, cap_bits))
    return _stanica(m, p, n, side, form, cap_bits)


# ---------------------------------------------------------------------------
# thm21: binomial bound with the 1 - 5(k-1)/(6n^2) factor
# ---------------------------------------------------------------------------


def _thm21_hyp(n, k, probe):
    if not probe:
        _require(n >= 4 and 2 <= k <= n // 2, f"thm21 needs n >= 4 and 2 <= k <= n//2, got ({n}, {k})")
    else:
        _require(n >= 2 and 1 <= k <= n - 1, "thm21 probe needs 1 <= k <= n-1")


def thm21_rational_check(n, k, *, mode=None, cap_bits=DEFAULT_CAP_BITS, probe=False):
    """C(n,k) < (1 - 5(k-1)/(6n^2)) n (n-1)^(n-1) / (k^k (n-k)^(n-k))."""
    mode = _mode(mode, True)
    _thm21_hyp(n, k, probe)
    six_n2 = 6 * n * n
    top = n * self_power(n - 1)
    if mode == EXACT:
        lhs = six_n2 * binomial(n, k) * _kk(n, k)
        rhs = (six_n2 - 5 * (k - 1)) * top
        return exact_verdict(lhs, rhs, True, (n, k))
    return adaptive_compare(
        binomial(n, k),
        lambda p: _I(six_n2 - 5 * (k - 1), p) * _I(top, p) / (_I(six_n2, p) * _I(_kk(n, k), p)),
        "<",
        cap_bits,
        witness=(n, k),
    )


def thm21_exp_form(n: int, k: int, prec: int) -> Interval:
    """e^(-11(k-1)/(12 n^2)) n (n-1)^(n-1) / (k^k (n-k)^(n-k))."""
    factor = rigor.exp(_I(Fraction(-11 * (k - 1), 12 * n * n), prec))
    return factor * _I(n * self_power(n - 1), prec) / _I(_kk(n, k), prec)


def thm21_exp_check(n, k, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    _mode(mode, False)
    _thm21_hyp(n, k, False)
    factor = Fraction(-11 * (k - 1), 12 * n * n)
    top = n * self_power(n - 1)
    return adaptive_compare(
        binomial(n, k) * _kk(n, k),
        lambda p: rigor.exp(_I(factor, p)) * _I(top, p),
        "<",
        cap_bits,
        witness=(n, k),
    )


def thm21_check(n, k, variant="rational", *, mode=None, cap_bits=DEFAULT_CAP_BITS, probe=False) -> Verdict:
    if variant == "rational":
        return thm21_rational_check(n, k, mode=mode, cap_bits=cap_bits, probe=probe)
    if variant == "exponential":
        return thm21_exp_check(n, k, mode=mode, cap_bits=cap_bits)
    raise ValueError(f"unknown thm21 variant {variant!r}")


def thm21_chain(n: int, k: int, cap_bits: int = DEFAULT_CAP_BITS) -> tuple[Verdict, Verdict]:
    """Verdicts for C(n,k) < e-form and e-form < rational form."""
    _thm21_hyp(n, k, False)
    rational = Fraction((6 * n * n - 5 * (k - 1)) * n * self_power(n - 1), 6 * n * n * _kk(n, k))
    return (
        thm21_exp_check(n, k, cap_bits=cap_bits),
        adaptive_compare(lambda p: thm21_exp_form(n, k, p), rational, "<", cap_bits, witness=(n, k)),
    )


# ---------------------------------------------------------------------------
# thm22 / thm23: central and 1/m binomial bounds
# ---------------------------------------------------------------------------


def thm22_check(n, k, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """C(n,k) < sqrt(2/pi) 2^n / sqrt(n)."""
    _mode(mode, False)
    _require(n >= 1 and 0 <= k <= n, "thm22 needs n >= 1 and 0 <= k <= n")
    return adaptive_compare(binomial(n, k), lambda p: thm22_bound(n, p), "<", cap_bits, witness=(n, k))


def thm22_weak_check(n, k, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """C(n,k) < (4/5) 2^n / sqrt(n); exact form 25 C^2 n < 16 * 4^n."""
    mode = _mode(mode, True)
    _require(n >= 1 and 0 <= k <= n, "thm22 needs n >= 1 and 0 <= k <= n")
    c = binomial(n, k)
    if mode == EXACT:
        return exact_verdict(25 * c * c * n, 16 * mpz(4) ** n, True, (n, k))
    return adaptive_compare(
        c, lambda p: _I(Fraction(4, 5) * 2**n, p) / rigor.sqrt(_I(n, p)), "<", cap_bits, witness=(n, k)
    )


def thm23_check(m, n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """C(n, floor(n/m)) < m / sqrt(2 pi (m-1) n) * (m / (m-1)^((m-1)/m))^n."""
    _mode(mode, False)
    _require(m >= 3 and n >= 3 and n >= 2 * m - 1, "thm23 needs m, n >= 3 and n >= 2m - 1")
    return adaptive_compare(binomial(n, n // m), lambda p: thm23_bound(m, n, p), "<", cap_bits, witness=(m, n))


# ---------------------------------------------------------------------------
# thm24 / corollary21: bounds for n//5 <= k
# ---------------------------------------------------------------------------


def _thm24_hyp(n, k):
    _require(n >= 400 and n // 5 <= k <= n // 2, f"thm24 needs n >= 400 and n//5 <= k <= n//2, got ({n}, {k})")


def thm24_rational_check(n, k, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """C(n,k) < (1 - 5d/(6n^2)) n^(n-1/2) / (k^k (n-k)^(n-k)), d = k - floor(n/5).

    Exact form: 36 n^4 (C k^k (n-k)^(n-k))^2 < (6n^2 - 5d)^2 n^(2n-1).
    """
    mode = _mode(mode, True)
    _thm24_hyp(n, k)
    d = k - n // 5
    six_n2 = 6 * n * n
    g = binomial(n, k) * _kk(n, k)
    if mode == EXACT:
        return exact_verdict(six_n2 * six_n2 * g * g, (six_n2 - 5 * d) ** 2 * mpz(n) ** (2 * n - 1), True, (n, k))
    return adaptive_compare(
        binomial(n, k),
        lambda p: _I(Fraction(six_n2 - 5 * d, six_n2), p)
        * _I(self_power(n), p)
        / (rigor.sqrt(_I(n, p)) * _I(_kk(n, k), p)),
        "<",
        cap_bits,
        witness=(n, k),
    )


def thm24_exp_form(n: int, k: int, prec: int) -> Interval:
    """e^(-11d/(12n^2)) n^(n-1/2) / (k^k (n-k)^(n-k))."""
    d = k - n // 5
    factor = rigor.exp(_I(Fraction(-11 * d, 12 * n * n), prec))
    return factor * _I(self_power(n), prec) / (rigor.sqrt(_I(n, prec)) * _I(_kk(n, k), prec))


def thm24_exp_check(n, k, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    _mode(mode, False)
    _thm24_hyp(n, k)
    d = k - n // 5
    return adaptive_compare(
        binomial(n, k) * _kk(n, k),
        lambda p: rigor.exp(_I(Fraction(-11 * d, 12 * n * n), p)) * _I(self_power(n), p) / rigor.sqrt(_I(n, p)),
        "<",
        cap_bits,
        witness=(n, k),
    )


def thm24_pow2_check(n, k, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """C(n,k) < (1 - 5d/(6n^2)) 2^n / sqrt(n); exact form 36 n^4 C^2 n < (6n^2 - 5d)^2 4^n."""
    mode = _mode(mode, True)
    _thm24_hyp(n, k)
    d = k - n // 5
    six_n2 = 6 * n * n
    c = binomial(n, k)
    if mode == EXACT:
        return exact_verdict(six_n2 * six_n2 * c * c * n, (six_n2 - 5 * d) ** 2 * mpz(4) ** n, True, (n, k))
    return adaptive_compare(
        c,
        lambda p: _I(Fraction((six_n2 - 5 * d) * 2**n, six_n2), p) / rigor.sqrt(_I(n, p)),
        "<",
        cap_bits,
        witness=(n, k),
    )


def thm24_check(n, k, variant="rational", *, mode=None, cap_bits=DEFAULT_CAP_BITS) -> Verdict:
    checks = {"rational": thm24_rational_check, "exponential": thm24_exp_check, "pow2": thm24_pow2_check}
    try:
        fn = checks[variant]
    except KeyError:
        raise ValueError(f"unknown thm24 variant {variant!r}") from None
    return fn(n, k, mode=mode, cap_bits=cap_bits)


def thm24_chain(n: int, k: int, cap_bits: int = DEFAULT_CAP_BITS) -> tuple[Verdict, Verdict, Verdict]:
    """Verdicts for C(n,k) < e-form <= rational form <= pow2 form.

    The last two links are equalities at k = floor(n/5) and at k = n/2
    respectively, so they are certified non-strictly.
    """
    _thm24_hyp(n, k)
    d = k - n // 5
    first = thm24_exp_check(n, k, cap_bits=cap_bits)
    if d == 0:
        # both factors are exactly 1
        second = exact_verdict(1, 1, False, (n, k))
    else:
        factor = Fraction(6 * n * n - 5 * d, 6 * n * n)
        second = adaptive_compare(
            lambda p: rigor.exp(_I(Fraction(-11 * d, 12 * n * n), p)), factor, "<", cap_bits, witness=(n, k)
        )
    # common positive factor (1 - 5d/(6n^2)) / sqrt(n) cancels: n^n <= 2^n k^k (n-k)^(n-k)
    third = lemma23_check(n, k)
    return first, second, third


def corollary21_check(n, k, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """C(n,k) < n^(n-1/2) / (k^k (n-k)^(n-k)) for n//5 <= k <= 4n//5."""
    mode = _mode(mode, True)
    _require(n >= 400 and n // 5 <= k <= 4 * n // 5, "corollary21 needs n >= 400 and n//5 <= k <= 4n//5")
    j = min(k, n - k)
    g = binomial(n, j) * _kk(n, j)
    if mode == EXACT:
        return exact_verdict(g * g * n, mpz(n) ** (2 * n), True, (n, k))
    return adaptive_compare(
        binomial(n, j),
        lambda p: _I(self_power(n), p) / (rigor.sqrt(_I(n, p)) * _I(_kk(n, j), p)),
        "<",
        cap_bits,
        witness=(n, k),
    )


# ---------------------------------------------------------------------------
# Lemmas
# ---------------------------------------------------------------------------


def lemma21_check(n, k, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """C(n,k) k^k (n-k)^(n-k) > e^(11/(12n^2)) C(n,k+1) (k+1)^(k+1) (n-k-1)^(n-k-1)."""
    _mode(mode, False)
    _require(n >= 3 and 0 <= k <= n // 2 - 1, "lemma21 needs n >= 3 and 0 <= k <= n//2 - 1")
    left = binomial(n, k) * _kk(n, k)
    right = binomial(n, k + 1) * _kk(n, k + 1)
    factor = Fraction(11, 12 * n * n)
    return adaptive_compare(left, lambda p: rigor.exp(_I(factor, p)) * _I(right, p), ">", cap_bits, witness=(n, k))


def lemma22_check(k, r, *, mode=None, cap_bits=DEFAULT_CAP_BITS, probe=False):
    """C(5k+r, k) < (5k+r)^(5k+r-1/2) / (k^k (4k+r)^(4k+r)).

    Exact form: (C k^k (4k+r)^(4k+r))^2 (5k+r) < (5k+r)^(2(5k+r)).
    ``probe=True`` lifts the k >= 80 hypothesis (k >= 1 still required).
    """
    mode = _mode(mode, True)
    _require(0 <= r <= 4, "lemma22 needs 0 <= r <= 4")
    _require(k >= (1 if probe else 80), f"lemma22 needs k >= 80, got {k}")
    big = 5 * k + r
    c = binomial(big, k)
    if mode == EXACT:
        g = c * _kk(big, k)
        return exact_verdict(g * g * big, mpz(big) ** (2 * big), True, (k, r))
    return adaptive_compare(
        c,
        lambda p: _I(self_power(big), p) / (rigor.sqrt(_I(big, p)) * _I(_kk(big, k), p)),
        "<",
        cap_bits,
        witness=(k, r),
    )


def lemma23_check(n, k, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """n^n <= 2^n k^k (n-k)^(n-k), non-strict; 0^0 = 1 at the endpoints."""
    mode = _mode(mode, True)
    _require(n >= 1 and 0 <= k <= n, "lemma23 needs n >= 1 and 0 <= k <= n")
    lhs, rhs = self_power(n), mpz(2) ** n * _kk(n, k)
    if mode == EXACT:
        return exact_verdict(lhs, rhs, False, (n, k))
    return adaptive_compare(lambda p: _I(lhs, p), lambda p: _I(rhs, p), "<=", cap_bits, witness=(n, k))


# ---------------------------------------------------------------------------
# Proof-step inequalities
# ---------------------------------------------------------------------------


def ineq21_check(m, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """m log(1 + 1/m) > 1 - 1/(2m) + 1/(3m^2) - 1/(4m^3)."""
    _mode(mode, False)
    _require(m >= 1, "ineq21 needs m >= 1")
    poly = 1 - Fraction(1, 2 * m) + Fraction(1, 3 * m * m) - Fraction(1, 4 * m**3)
    return adaptive_compare(
        lambda p: rigor.log1p(_I(Fraction(1, m), p)) * m, poly, ">", cap_bits, witness=(m,)
    )


def ineq23_check(m, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """(m-1) log(1 - 1/m) > -1 + 1/(2m) + 1/(6m^2) + 1/(12m^3)."""
    _mode(mode, False)
    _require(m >= 2, "ineq23 needs m >= 2")
    poly = -1 + Fraction(1, 2 * m) + Fraction(1, 6 * m * m) + Fraction(1, 12 * m**3)
    return adaptive_compare(
        lambda p: rigor.log1p(_I(Fraction(-1, m), p)) * (m - 1), poly, ">", cap_bits, witness=(m,)
    )


def ineq25_check(n, k, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """e^(-x) < 1 - x + x^2/2 < 1 - 5(k-1)/(6n^2) with x = 11(k-1)/(12n^2)."""
    _mode(mode, False)
    _require(n >= 4 and 2 <= k <= n // 2, "ineq25 needs n >= 4 and 2 <= k <= n//2")
    x = Fraction(11 * (k - 1), 12 * n * n)
    quad = 1 - x + x * x / 2
    return combine(
        adaptive_compare(lambda p: rigor.exp(_I(-x, p)), quad, "<", cap_bits, witness=(n, k)),
        exact_verdict(quad, 1 - Fraction(5 * (k - 1), 6 * n * n), True, (n, k)),
    )


def ineq26_check(m, r, n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """(m/(m-1))^r (n+1-r)/(n+1) <= prod_{j<r} (n-j)/(n-q-j) < (m/(m-1))^r, q = (n-r)/m.

    The product is also checked against C(n, q) / C(n-r, q).
    """
    _mode(mode, True)
    _require(m >= 3 and 1 <= r <= m - 1 and n >= r and n % m == r, "ineq26 needs m >= 3, 1 <= r < m, n = r mod m")
    q = (n - r) // m
    prod = Fraction(1)
    for j in range(r):
        prod *= Fraction(n - j, n - q - j)
    identity = Fraction(binomial(n, q), binomial(n - r, q))
    ratio = Fraction(m, m - 1) ** r
    # combine() reports the first verdict's margin when all hold
    return combine(
        exact_verdict(prod, ratio, True, (m, r, n)),
        exact_verdict(ratio * Fraction(n + 1 - r, n + 1), prod, False, (m, r, n)),
        exact_verdict(identity, prod, False, (m, r, n)),
        exact_verdict(prod, identity, False, (m, r, n)),
    )


def ineq27_lhs(k: int, r: int) -> Fraction:
    """(5k+r)^3 (8N^3 + 4N^2 + N + 1/30) / ((8k^3 + 4k^2 + k)(8M^3 + 4M^2 + M)), N = 5k+r, M = 4k+r."""
    big, mid = 5 * k + r, 4 * k + r
    top = 8 * big**3 + 4 * big**2 + big + Fraction(1, 30)
    bottom = (8 * k**3 + 4 * k**2 + k) * (8 * mid**3 + 4 * mid**2 + mid)
    return top * big**3 / bottom


def ineq27_check(k, r, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """The sufficient condition ... < pi^3 / (5k+r)^3, multiplied through by (5k+r)^3."""
    _mode(mode, False)
    _require(k > 200 and r in (2, 3, 4), "ineq27 needs k > 200 and r in {2, 3, 4}")
    return adaptive_compare(ineq27_lhs(k, r), lambda p: rigor.pow_int(pi(p), 3), "<", cap_bits, witness=(k, r))


def ineq28_check(n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    """C(n, floor(n/2) - 1) > 2^n / (n+1), i.e. f(n) <= floor(n/2) - 1."""
    mode = _mode(mode, True)
    _require(n >= 6, "ineq28 needs n >= 6")
    lhs, rhs = (n + 1) * binomial(n, n // 2 - 1), mpz(2) ** n
    if mode == EXACT:
        return exact_verdict(rhs, lhs, True, (n,))
    return adaptive_compare(lambda p: _I(lhs, p), lambda p: _I(rhs, p), ">", cap_bits, witness=(n,))


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

Limit = Callable[..., tuple[int, Optional[int]]]


@dataclass(frozen=True)
class BoundSpec:
    """Parameter signature, hypothesis region and checker of one bound.

    ``limits[i]`` maps the values of the earlier parameters to the inclusive
    hypothesis range ``(lo, hi)`` of parameter ``i`` (``hi`` None means
    unbounded). ``condition`` expresses any constraint not of that shape.
    """

    id: BoundId
    params: tuple[str, ...]
    limits: tuple[Limit, ...]
    check: Callable[..., Verdict]
    exact: bool
    strict: bool
    hypothesis: str
    condition: Optional[Callable[..., bool]] = field(default=None)

    def admissible(self, values: tuple[int, ...]) -> bool:
        if len(values) != len(self.params):
            return False
        for i, limit in enumerate(self.limits):
            lo, hi = limit(*values[:i])
            if values[i] < lo or (hi is not None and values[i] > hi):
                return False
        return self.condition is None or self.condition(*values)


def _open(lo):
    return lambda *_: (lo, None)


def _stanica_lower(m, p, n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    _mode(mode, False)
    return stanica_check(m, p, n, "lower", "classical", cap_bits=cap_bits)


def _stanica_upper(m, p, n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    _mode(mode, False)
    return stanica_check(m, p, n, "upper", "classical", cap_bits=cap_bits)


def _stanica_lower_printed(m, p, n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    _mode(mode, False)
    return stanica_check(m, p, n, "lower", "printed", cap_bits=cap_bits)


def _stanica_upper_printed(m, p, n, *, mode=None, cap_bits=DEFAULT_CAP_BITS):
    _mode(mode, False)
    return stanica_check(m, p, n, "upper", "printed", cap_bits=cap_bits)


_STANICA_LIMITS = (_open(2), lambda m: (1, m - 1), _open(1))
_NK_HALF = (_open(4), lambda n: (2, n // 2))
_NK_THM24 = (_open(400), lambda n: (n // 5, n // 2))

REGISTRY: dict[BoundId, BoundSpec] = {
    s.id: s
    for s in [
        BoundSpec(BoundId.ROBBINS_LOWER, ("n",), (_open(1),), robbins_lower_check, False, True, "n >= 1"),
        BoundSpec(BoundId.ROBBINS_UPPER, ("n",), (_open(1),), robbins_upper_check, False, True, "n >= 1"),
        BoundSpec(BoundId.EQ12_UPPER, ("m", "n"), (_open(2), _open(1)), eq12_check, False, True, "m >= 2, n >= 1"),
        BoundSpec(BoundId.HIRSCHHORN_LOWER, ("n",), (_open(2),), hirschhorn_lower_check, False, True, "n >= 2"),
        BoundSpec(BoundId.HIRSCHHORN_UPPER, ("n",), (_open(2),), hirschhorn_upper_check, False, True, "n >= 2"),
        BoundSpec(
            BoundId.HIRSCHHORN_REMAINDER, ("n",), (_open(2),), hirschhorn_remainder_check, False, True, "n >= 2"
        ),
        BoundSpec(BoundId.STANICA_LOWER, ("m", "p", "n"), _STANICA_LIMITS, _stanica_lower, False, True, "m > p >= 1, n >= 1"),
        BoundSpec(BoundId.STANICA_UPPER, ("m", "p", "n"), _STANICA_LIMITS, _stanica_upper, False, True, "m > p >= 1, n >= 1"),
        BoundSpec(
            BoundId.STANICA_LOWER_PRINTED, ("m", "p", "n"), _STANICA_LIMITS, _stanica_lower_printed, False, True,
            "m > p >= 1, n >= 1",
        ),
        BoundSpec(
            BoundId.STANICA_UPPER_PRINTED, ("m", "p", "n"), _STANICA_LIMITS, _stanica_upper_printed, False, True,
            "m > p >= 1, n >= 1",
        ),
        BoundSpec(BoundId.THM21_RATIONAL, ("n", "k"), _NK_HALF, thm21_rational_check, True, True, "n >= 4, 2 <= k <= n//2"),
        BoundSpec(BoundId.THM21_EXP, ("n", "k"), _NK_HALF, thm21_exp_check, False, True, "n >= 4, 2 <= k <= n//2"),
        BoundSpec(BoundId.THM22, ("n", "k"), (_open(1), lambda n: (0, n)), thm22_check, False, True, "n >= 1, 0 <= k <= n"),
        BoundSpec(
            BoundId.THM22_WEAK, ("n", "k"), (_open(1), lambda n: (0, n)), thm22_weak_check, True, True, "n >= 1, 0 <= k <= n"
        ),
        BoundSpec(
            BoundId.THM23, ("m", "n"), (_open(3), lambda m: (max(3, 2 * m - 1), None)), thm23_check, False, True,
            "m >= 3, n >= max(3, 2m-1)",
        ),
        BoundSpec(
            BoundId.THM24_RATIONAL, ("n", "k"), _NK_THM24, thm24_rational_check, True, True, "n >= 400, n//5 <= k <= n//2"
        ),
        BoundSpec(BoundId.THM24_EXP, ("n", "k"), _NK_THM24, thm24_exp_check, False, True, "n >= 400, n//5 <= k <= n//2"),
        BoundSpec(BoundId.THM24_POW2, ("n", "k"), _NK_THM24, thm24_pow2_check, True, True, "n >= 400, n//5 <= k <= n//2"),
        BoundSpec(
            BoundId.COROLLARY21, ("n", "k"), (_open(400), lambda n: (n // 5, 4 * n // 5)), corollary21_check, True, True,
            "n >= 400, n//5 <= k <= 4n//5",
        ),
        BoundSpec(
            BoundId.LEMMA21_RATIO, ("n", "k"), (_open(3), lambda n: (0, n // 2 - 1)), lemma21_check, False, True,
            "n >= 3, 0 <= k <= n//2 - 1",
        ),
        BoundSpec(BoundId.LEMMA22, ("k", "r"), (_open(80), lambda k: (0, 4)), lemma22_check, True, True, "k >= 80, 0 <= r <= 4"),
        BoundSpec(BoundId.LEMMA23, ("n", "k"), (_open(1), lambda n: (0, n)), lemma23_check, True, False, "n >= 1, 0 <= k <= n"),
        BoundSpec(BoundId.INEQ21, ("m",), (_open(1),), ineq21_check, False, True, "m >= 1"),
        BoundSpec(BoundId.INEQ23, ("m",), (_open(2),), ineq23_check, False, True, "m >= 2"),
        BoundSpec(BoundId.INEQ25, ("n", "k"), _NK_HALF, ineq25_check, False, True, "n >= 4, 2 <= k <= n//2"),
        BoundSpec(
            BoundId.INEQ26, ("m", "r", "n"), (_open(3), lambda m: (1, m - 1), lambda m, r: (r, None)), ineq26_check, True,
            True, "m >= 3, 1 <= r <= m-1, n = r mod m", condition=lambda m, r, n: n % m == r,
        ),
        BoundSpec(BoundId.INEQ27, ("k", "r"), (_open(201), lambda k: (2, 4)), ineq27_check, False, True, "k > 200, 2 <= r <= 4"),
        BoundSpec(BoundId.INEQ28, ("n",), (_open(6),), ineq28_check, True, True, "n >= 6"),
    ]
}

ALIASES = {
    "robbins": BoundId.ROBBINS_UPPER,
    "eq12": BoundId.EQ12_UPPER,
    "hirschhorn": BoundId.HIRSCHHORN_REMAINDER,
    "thm21": BoundId.THM21_RATIONAL,
    "thm24": BoundId.THM24_RATIONAL,
    "lemma21": BoundId.LEMMA21_RATIO,
}


def resolve(name: str | BoundId) -> BoundSpec:
    """Look up a bound by its id or a short alias such as ``thm21``."""
    if isinstance(name, BoundId):
        return REGISTRY[name]
    key = name.strip().lower().replace("-", "_")
    if key in ALIASES:
        return REGISTRY[ALIASES[key]]
    try:
        return REGISTRY[BoundId(key)]
    except ValueError:
        raise KeyError(f"unknown bound {name!r}") from None


@dataclass(frozen=True)
class CheckSpec:
    """One fully specified check: bound, parameters, evaluation mode."""

    bound: BoundId
    params: tuple[int, ...]
    mode: str = EXACT
    strictness: str = "strict"

    def __post_init__(self):
        spec = REGISTRY[self.bound]
        if self.mode == EXACT and not spec.exact:
            raise DomainError(f"{self.bound.value} has no exact path")
        if self.mode not in (EXACT, INTERVAL):
            raise ValueError(f"unknown mode {self.mode!r}")
        expected = "strict" if spec.strict else "non_strict"
        if self.strictness != expected:
            raise DomainError(f"{self.bound.value} is {expected}")
        if not spec.admissible(self.params):
            raise DomainError(f"{self.params} outside hypothesis {spec.hypothesis}")

    @classmethod
    def default(cls, bound: BoundId | str, params: tuple[int, ...]) -> "CheckSpec":
        spec = resolve(bound)
        return cls(spec.id, tuple(params), EXACT if spec.exact else INTERVAL, "strict" if spec.strict else "non_strict")

    def run(self, cap_bits: int = DEFAULT_CAP_BITS) -> Verdict:
        return REGISTRY[self.bound].check(*self.params, mode=self.mode, cap_bits=cap_bits)
