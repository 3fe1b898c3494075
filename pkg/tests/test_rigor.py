from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from binombounds import rigor
from binombounds.exactnum import DomainError
from binombounds.rigor import (
    Interval,
    Status,
    Verdict,
    adaptive_compare,
    combine,
    const_enclosure,
    exact_verdict,
    format_decimal,
    interval_arith,
    interval_fn,
)
from oracles import E_DIGITS, PI_DIGITS, digit_bracket, enclosure_trials, eval_interval

mpmath.mp.prec = 2000


def test_rational_expression_enclosures(rng):
    for _, exact, _, iv in enclosure_trials(rng, 1000):
        assert exact in iv


def test_refinement_is_nested(rng):
    for expr, exact, prec, iv in enclosure_trials(rng, 200, prec_choices=(24, 53, 64)):
        finer = eval_interval(expr, 2 * prec)
        assert exact in finer
        assert iv.contains(finer)
        assert finer.bounds()[1] - finer.bounds()[0] <= iv.bounds()[1] - iv.bounds()[0]


def test_exact_enclosure_is_tight():
    third = Interval.exact(Fraction(1, 3), 53)
    lo, hi = third.bounds()
    assert lo < Fraction(1, 3) < hi
    assert hi - lo == Fraction(1, 2**54)
    two = Interval.exact(2, 53)
    assert two.lo == two.hi == 2


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def _within(iv: Interval, ref) -> bool:
    lo, hi = iv.bounds()
    eps = mpmath.mpf(2) ** -1900
    return _mp(lo) <= ref + eps and ref - eps <= _mp(hi)


@given(st.fractions(min_value=Fraction(-200), max_value=Fraction(200), max_denominator=10**12),
       st.sampled_from([32, 64, 200]))
def test_exp_log_sqrt_against_mpmath(x, prec):
    ix = Interval.exact(x, prec)
    assert _within(rigor.exp(ix), mpmath.exp(_mp(x)))
    if x > 0:
        assert _within(rigor.log(ix), mpmath.log(_mp(x)))
        assert _within(rigor.sqrt(ix), mpmath.sqrt(_mp(x)))
        assert _within(rigor.rootn(ix, 3), mpmath.cbrt(_mp(x)))
        assert _within(rigor.pow_real(ix, Fraction(7, 3)), mpmath.power(_mp(x), mpmath.mpf(7) / 3))
    if x > -1:
        assert _within(rigor.log1p(ix), mpmath.log1p(_mp(x)))


@given(st.fractions(min_value=Fraction(-50), max_value=Fraction(50), max_denominator=1000), st.integers(-6, 6))
def test_integer_powers_exact(x, n):
    if x == 0 and n < 0:
        return
    assert x**n in rigor.pow_int(Interval.exact(x, 53), n)


def test_pow_of_interval_straddling_zero():
    iv = Interval(rigor.mpfr(-2), rigor.mpfr(3), 53)
    sq = iv**2
    assert sq.bounds() == (0, 9)
    assert (iv**3).bounds() == (-8, 27)


def test_constants_match_published_digits():
    for which, digits in (("pi", PI_DIGITS), ("e", E_DIGITS)):
        lo, hi = digit_bracket(digits)
        for prec in (16, 53, 100, 190):
            c = const_enclosure(which, prec)
            clo, chi = c.bounds()
            # the constant lies in both brackets, so they must overlap
            assert clo <= hi and lo <= chi
            assert chi - clo <= Fraction(1, 2 ** (prec - 2))
    with pytest.raises(DomainError):
        const_enclosure("pi", 8)


def test_domain_errors():
    zero_ish = Interval.exact(0, 53) + Interval(rigor.mpfr(-1), rigor.mpfr(1), 53)
    with pytest.raises(DomainError):
        interval_arith("div", Interval.exact(1, 53), zero_ish)
    with pytest.raises(DomainError):
        rigor.log(zero_ish)
    with pytest.raises(DomainError):
        rigor.sqrt(Interval.exact(-1, 53))
    with pytest.raises(DomainError):
        rigor.pow_real(Interval.exact(-1, 53), 2)
    with pytest.raises(ValueError):
        interval_fn("tan", Interval.exact(1, 53))
    assert interval_fn("pow_real", Interval.exact(4, 53), Fraction(1, 2)).contains(2)


@given(st.fractions(max_denominator=10**40), st.integers(3, 40))
def test_format_decimal_rounds_outward(x, digits):
    lo = Fraction(format_decimal(x, digits, up=False))
    hi = Fraction(format_decimal(x, digits, up=True))
    assert lo <= x <= hi
    if x:
        assert hi - lo <= abs(x) / 10 ** (digits - 2)


def test_repr_is_parseable_and_outward():
    iv = rigor.pi(64)
    lo_s, hi_s = repr(iv).strip("[]").split(", ")
    lo, hi = iv.bounds()
    assert Fraction(lo_s) <= lo and hi <= Fraction(hi_s)


# -- verdicts ---------------------------------------------------------------


def test_failing_verdict_needs_witness():
    with pytest.raises(ValueError):
        Verdict(Status.FAILS)
    assert Verdict(Status.FAILS, (1,)).fails


def test_combine_worst_wins():
    h = Verdict(Status.HOLDS, None, 64)
    u = Verdict(Status.UNDECIDED, None, 128)
    f = Verdict(Status.FAILS, (3,), 0)
    assert combine(h, u).undecided
    assert combine(h, u, f).fails and combine(h, u, f).witness == (3,)
    assert combine(h, h).precision_used == 64


def test_exact_ties():
    assert exact_verdict(3, 3, strict=True, witness=(0,)).fails
    assert exact_verdict(3, 3, strict=False).holds
    assert adaptive_compare(Fraction(1, 2), Fraction(1, 2), "<=").holds
    assert adaptive_compare(Fraction(1, 2), Fraction(1, 2), "<", witness=(1,)).fails
    assert adaptive_compare(2, 1, ">").holds


def _sqrt2(prec):
    return rigor.sqrt(Interval.exact(2, prec))


def test_adaptive_compare_escalates_and_caps():
    # a rational 2^-200 away from sqrt(2) needs more than 200 bits
    approx = Fraction(int(mpmath.floor(mpmath.sqrt(2) * mpmath.mpf(2) ** 200)), 2**200)
    v = adaptive_compare(approx, _sqrt2, "<")
    assert v.holds and v.precision_used > 200
    capped = adaptive_compare(approx, _sqrt2, "<", cap_bits=128)
    assert capped.undecided and capped.precision_used == 128
    # an undecidable tie stays undecided at every cap rather than guessing
    tie = adaptive_compare(_sqrt2, lambda p: rigor.sqrt(Interval.exact(8, p)) / 2, "<", cap_bits=1024)
    assert tie.undecided


@given(st.integers(1, 400), st.booleans())
def test_decision_monotonicity(bits, above):
    # as the cap grows a decision may appear but never changes
    base = mpmath.sqrt(2) * mpmath.mpf(2) ** bits
    num = int(mpmath.ceil(base)) if above else int(mpmath.floor(base))
    q = Fraction(num, 2**bits)
    seen = None
    for cap in (64, 128, 256, 512, 1024):
        v = adaptive_compare(_sqrt2, q, "<", cap_bits=cap, witness=(bits,))
        if seen is not None:
            assert v.status is seen
        elif not v.undecided:
            seen = v.status
    assert seen is (Status.HOLDS if above else Status.FAILS)


def test_adaptive_compare_rejects_unknown_relation():
    with pytest.raises(ValueError):
        adaptive_compare(1, 2, "!=")
