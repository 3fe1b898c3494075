"""Outward-rounded interval arithmetic and the adaptive-precision comparator.

Endpoints are MPFR floats (via gmpy2). Every endpoint is produced by a single
correctly rounded MPFR operation in the appropriate direction (toward -inf for
``lo``, toward +inf for ``hi``), so an interval computed from exact inputs
always contains the true real value, and enclosures compose.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .exactnum import DomainError

DEFAULT_START_BITS = 64
DEFAULT_CAP_BITS = 16384

_MPFR = type(mpfr(0))
_MPZ = type(mpz(0))
_MPQ = type(mpq(0))
Exact = Union[int, _MPZ, Fraction, _MPQ]


@lru_cache(maxsize=None)
def _ctx(prec: int, up: bool) -> gmpy2.context:
    return gmpy2.context(
        precision=prec,
        round=gmpy2.RoundUp if up else gmpy2.RoundDown,
        emax=gmpy2.get_emax_max(),
        emin=gmpy2.get_emin_min(),
        subnormalize=False,
    )


def _down(prec: int) -> gmpy2.context:
    return _ctx(prec, False)


def _up(prec: int) -> gmpy2.context:
    return _ctx(prec, True)


def _to_q(x) -> _MPQ:
    """Exact rational value of an int, Fraction or finite mpfr."""
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, _MPFR):
        return mpq(*x.as_integer_ratio())
    return mpq(x)


class Interval:
    """Closed interval ``[lo, hi]`` guaranteed to contain a real value."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi, prec: int):
        if not lo <= hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.prec = prec

    @classmethod
    def exact(cls, value: Exact | "Interval", prec: int = DEFAULT_START_BITS) -> "Interval":
        """Tightest enclosure of an exact int or rational at ``prec`` bits."""
        if isinstance(value, Interval):
            return value
        if isinstance(value, Fraction):
            value = mpq(value.numerator, value.denominator)
        elif isinstance(value, bool) or not isinstance(value, (int, _MPZ, _MPQ, _MPFR)):
            raise TypeError(f"cannot enclose {type(value).__name__}")
        return cls(mpfr(value, prec, _down(prec)), mpfr(value, prec, _up(prec)), prec)

    # -- queries ---------------------------------------------------------

    def width(self):
        return _up(self.prec).sub(self.hi, self.lo)

    def contains(self, value) -> bool:
        """Exact membership test for an int, rational or mpfr value."""
        if isinstance(value, Interval):
            return self.lo <= value.lo and value.hi <= self.hi
        q = _to_q(value)
        return _to_q(self.lo) <= q <= _to_q(self.hi)

    __contains__ = contains

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def bounds(self) -> tuple[Fraction, Fraction]:
        """Endpoints as exact fractions."""
        return Fraction(*self.lo.as_integer_ratio()), Fraction(*self.hi.as_integer_ratio())

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi and self.prec == other.prec

    def __hash__(self):
        return hash((self.lo, self.hi, self.prec))

    def __repr__(self):
        digits = decimal_digits(self.prec)
        return f"[{format_decimal(self.lo, digits, up=False)}, {format_decimal(self.hi, digits, up=True)}]"

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        return Interval.exact(other, self.prec)

    def __neg__(self):
        return Interval(-self.hi, -self.lo, self.prec)

    def __add__(self, other):
        return interval_arith("add", self, self._coerce(other))

    def __radd__(self, other):
        return interval_arith("add", self._coerce(other), self)

    def __sub__(self, other):
        return interval_arith("sub", self, self._coerce(other))

    def __rsub__(self, other):
        return interval_arith("sub", self._coerce(other), self)

    def __mul__(self, other):
        return interval_arith("mul", self, self._coerce(other))

    def __rmul__(self, other):
        return interval_arith("mul", self._coerce(other), self)

    def __truediv__(self, other):
        return interval_arith("div", self, self._coerce(other))

    def __rtruediv__(self, other):
        return interval_arith("div", self._coerce(other), self)

    def __pow__(self, n: int):
        return pow_int(self, n)


def interval_arith(op: str, a: Interval, b: Interval) -> Interval:
    """``a op b`` for op in {add, sub, mul, div}, outward rounded."""
    prec = max(a.prec, b.prec)
    lo_ctx, hi_ctx = _down(prec), _up(prec)
    if op == "add":
        return Interval(lo_ctx.add(a.lo, b.lo), hi_ctx.add(a.hi, b.hi), prec)
    if op == "sub":
        return Interval(lo_ctx.sub(a.lo, b.hi), hi_ctx.sub(a.hi, b.lo), prec)
    if op == "mul":
        if a.lo >= 0 and b.lo >= 0:
            return Interval(lo_ctx.mul(a.lo, b.lo), hi_ctx.mul(a.hi, b.hi), prec)
        pairs = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)]
        return Interval(
            min(lo_ctx.mul(x, y) for x, y in pairs),
            max(hi_ctx.mul(x, y) for x, y in pairs),
            prec,
        )
    if op == "div":
        if b.lo <= 0 <= b.hi:
            raise DomainError("division by an interval containing zero")
        if a.lo >= 0 and b.lo > 0:
            return Interval(lo_ctx.div(a.lo, b.hi), hi_ctx.div(a.hi, b.lo), prec)
        pairs = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)]
        return Interval(
            min(lo_ctx.div(x, y) for x, y in pairs),
            max(hi_ctx.div(x, y) for x, y in pairs),
            prec,
        )
    raise ValueError(f"unknown interval op {op!r}")


# -- elementary functions ----------------------------------------------------


def _monotone(fn_name: str, x: Interval) -> Interval:
    lo = getattr(_down(x.prec), fn_name)(x.lo)
    hi = getattr(_up(x.prec), fn_name)(x.hi)
    return Interval(lo, hi, x.prec)


def exp(x: Interval) -> Interval:
    return _monotone("exp", x)


def log(x: Interval) -> Interval:
    if not x.lo > 0:
        raise DomainError("log requires a strictly positive interval")
    return _monotone("log", x)


def log1p(x: Interval) -> Interval:
    if not x.lo > -1:
        raise DomainError("log1p requires x > -1")
    return _monotone("log1p", x)


def sqrt(x: Interval) -> Interval:
    if x.lo < 0:
        raise DomainError("sqrt requires a nonnegative interval")
    return _monotone("sqrt", x)


def rootn(x: Interval, k: int) -> Interval:
    """Principal k-th root of a nonnegative interval."""
    if k < 1:
        raise DomainError("root order must be positive")
    if x.lo < 0:
        raise DomainError("rootn requires a nonnegative interval")
    return Interval(_down(x.prec).rootn(x.lo, k), _up(x.prec).rootn(x.hi, k), x.prec)


def pow_int(x: Interval, n: int) -> Interval:
    if n < 0:
        return 1 / pow_int(x, -n)
    if n == 0:
        return Interval.exact(1, x.prec)
    lo_ctx, hi_ctx = _down(x.prec), _up(x.prec)
    if x.lo >= 0:
        return Interval(lo_ctx.pow(x.lo, n), hi_ctx.pow(x.hi, n), x.prec)
    if n % 2:
        return Interval(lo_ctx.pow(x.lo, n), hi_ctx.pow(x.hi, n), x.prec)
    if x.hi <= 0:
        return Interval(lo_ctx.pow(x.hi, n), hi_ctx.pow(x.lo, n), x.prec)
    return Interval(mpfr(0, x.prec), hi_ctx.pow(max(-x.lo, x.hi), n), x.prec)


def pow_real(x: Interval, y: Interval | Exact) -> Interval:
    """``x ** y`` for positive ``x`` as ``exp(y * log x)``."""
    if not x.lo > 0:
        raise DomainError("pow_real requires a strictly positive base")
    if not isinstance(y, Interval):
        y = Interval.exact(y, x.prec)
    return exp(y * log(x))


_FUNCTIONS = {"exp": exp, "log": log, "log1p": log1p, "sqrt": sqrt}


def interval_fn(fn: str, x: Interval, y: Interval | Exact | None = None) -> Interval:
    """Dispatch by name: exp, log, log1p, sqrt, pow_real."""
    if fn == "pow_real":
        if y is None:
            raise ValueError("pow_real needs an exponent")
        return pow_real(x, y)
    try:
        return _FUNCTIONS[fn](x)
    except KeyError:
        raise ValueError(f"unknown interval function {fn!r}") from None


@lru_cache(maxsize=64)
def const_enclosure(which: str, prec: int) -> Interval:
    """Enclosure of pi or e at ``prec`` bits (width at most one ulp)."""
    if prec < 16:
        raise DomainError("precision must be at least 16 bits")
    if which == "pi":
        return Interval(_down(prec).const_pi(), _up(prec).const_pi(), prec)
    if which == "e":
        one = mpfr(1, prec)
        return Interval(_down(prec).exp(one), _up(prec).exp(one), prec)
    raise ValueError(f"unknown constant {which!r}")


def pi(prec: int) -> Interval:
    return const_enclosure("pi", prec)


# -- decimal rendering -------------------------------------------------------


def decimal_digits(prec: int) -> int:
    """Significant decimal digits that resolve a ``prec``-bit float."""
    return math.ceil(prec * math.log10(2)) + 1


def _floor_log10(a: Fraction) -> int:
    e = len(str(a.numerator)) - len(str(a.denominator))
    while Fraction(10) ** e > a:
        e -= 1
    while Fraction(10) ** (e + 1) <= a:
        e += 1
    return e


def format_decimal(x, digits: int, up: bool) -> str:
    """Scientific-notation string rounded toward +inf (``up``) or -inf.

    The result parses back with ``Fraction(s)``; rounding direction keeps a
    printed lower endpoint below, and a printed upper endpoint above, the value.
    """
    q = Fraction(*x.as_integer_ratio()) if isinstance(x, _MPFR) else Fraction(x)
    if q == 0:
        return "0"
    neg = q < 0
    a = -q if neg else q
    scale = _floor_log10(a) - digits + 1
    scaled = a / Fraction(10) ** scale
    away = up != neg
    m = math.ceil(scaled) if away else math.floor(scaled)
    s = str(m)
    tail = s[1:].rstrip("0")
    mant = s[0] + ("." + tail if tail else "")
    return f"{'-' if neg else ''}{mant}e{scale + len(s) - 1:+d}"


# -- verdicts and adaptive comparison ---------------------------------------


class Status(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDED = "undecided"


Margin = Union[Interval, Fraction, None]


@dataclass(frozen=True)
class Verdict:
    """Outcome of one inequality check.

    ``margin`` encloses (larger side - smaller side) for the claimed relation,
    so it is positive when the claim holds. It is an exact ``Fraction`` when
    the decision was made in exact arithmetic, in which case
    ``precision_used`` is 0.
    """

    status: Status
    witness: tuple | None = None
    precision_used: int = 0
    margin: Margin = None

    def __post_init__(self):
        if self.status is Status.FAILS and self.witness is None:
            raise ValueError("a failing verdict must carry a witness")

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    @property
    def undecided(self) -> bool:
        return self.status is Status.UNDECIDED


_SEVERITY = {Status.HOLDS: 0, Status.UNDECIDED: 1, Status.FAILS: 2}


def combine(*verdicts: Verdict) -> Verdict:
    """Conjunction of several verdicts: the worst status wins."""
    worst = max(verdicts, key=lambda v: _SEVERITY[v.status])
    prec = max(v.precision_used for v in verdicts)
    if worst.undecided:
        prec = worst.precision_used
    return Verdict(worst.status, worst.witness, prec, worst.margin)


Expr = Union[Exact, Interval, Callable[[int], Union[Exact, Interval]]]

_RELATIONS = {"<": True, "<=": False, ">": True, ">=": False}


def _is_exact(v) -> bool:
    return isinstance(v, (int, _MPZ, Fraction, _MPQ)) and not isinstance(v, bool)


def exact_verdict(smaller: Exact, larger: Exact, strict: bool, witness: tuple = ()) -> Verdict:
    """Decide ``smaller < larger`` (or ``<=``) in exact arithmetic."""
    gap = Fraction(larger) - Fraction(smaller)
    ok = gap > 0 or (gap == 0 and not strict)
    if ok:
        return Verdict(Status.HOLDS, None, 0, gap)
    return Verdict(Status.FAILS, tuple(witness), 0, gap)


def adaptive_compare(
    lhs: Expr,
    rhs: Expr,
    relation: str = "<",
    cap_bits: int = DEFAULT_CAP_BITS,
    *,
    start_bits: int = DEFAULT_START_BITS,
    witness: tuple = (),
) -> Verdict:
    """Certify ``lhs relation rhs``, doubling precision until decided.

    Each side is an exact value, an interval, or a callable taking a
    precision in bits. If both sides evaluate to exact rationals the relation
    is decided exactly (ties fail strict relations). Otherwise the difference
    is enclosed and a decision is reported only once the enclosure excludes
    zero; past ``cap_bits`` the result is UNDECIDED.
    """
    try:
        strict = _RELATIONS[relation]
    except KeyError:
        raise ValueError(f"unknown relation {relation!r}") from None
    smaller, larger = (lhs, rhs) if relation in ("<", "<=") else (rhs, lhs)
    prec = min(start_bits, cap_bits)
    while True:
        a = smaller(prec) if callable(smaller) else smaller
        b = larger(prec) if callable(larger) else larger
        if _is_exact(a) and _is_exact(b):
            return exact_verdict(a, b, strict, witness)
        margin = Interval.exact(b, prec) - Interval.exact(a, prec)
        if margin.lo > 0:
            return Verdict(Status.HOLDS, None, prec, margin)
        if margin.hi < 0:
            return Verdict(Status.FAILS, tuple(witness), prec, margin)
        if prec >= cap_bits:
            return Verdict(Status.UNDECIDED, None, cap_bits, margin)
        prec = min(2 * prec, cap_bits)
