"""Independent reference computations shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from binombounds.exactnum import DomainError
from binombounds.rigor import Interval

OPS = ("add", "sub", "mul", "div")


def random_rational(rng: random.Random) -> Fraction:
    num = rng.randint(-(10**rng.randint(1, 30)), 10 ** rng.randint(1, 30))
    den = rng.randint(1, 10 ** rng.randint(1, 30))
    return Fraction(num, den)


def random_expression(rng: random.Random, depth: int) -> tuple:
    if depth == 0 or rng.random() < 0.25:
        return ("leaf", random_rational(rng))
    return (rng.choice(OPS), random_expression(rng, depth - 1), random_expression(rng, depth - 1))


def eval_exact(expr) -> Optional[Fraction]:
    """Fraction value, or None if a division by zero occurs."""
    if expr[0] == "leaf":
        return expr[1]
    a, b = eval_exact(expr[1]), eval_exact(expr[2])
    if a is None or b is None:
        return None
    if expr[0] == "add":
        return a + b
    if expr[0] == "sub":
        return a - b
    if expr[0] == "mul":
        return a * b
    return None if b == 0 else a / b


def eval_interval(expr, prec: int) -> Interval:
    if expr[0] == "leaf":
        return Interval.exact(expr[1], prec)
    a, b = eval_interval(expr[1], prec), eval_interval(expr[2], prec)
    if expr[0] == "add":
        return a + b
    if expr[0] == "sub":
        return a - b
    if expr[0] == "mul":
        return a * b
    return a / b


def enclosure_trials(rng: random.Random, trials: int, prec_choices=(24, 53, 64, 113, 256)):
    """Yield (expr, exact value, prec, interval) for ``trials`` evaluable expressions."""
    done = 0
    while done < trials:
        expr = random_expression(rng, rng.randint(1, 5))
        exact = eval_exact(expr)
        if exact is None:
            continue
        prec = rng.choice(prec_choices)
        try:
            iv = eval_interval(expr, prec)
        except DomainError:
            # a divisor enclosure straddled zero at this precision
            continue
        done += 1
        yield expr, exact, prec, iv


def f_linear(n: int) -> int:
    """Least k >= 1 with C(n, k) > 2^n/(n+1), by linear scan with Python ints."""
    from math import comb

    k = 1
    while (n + 1) * comb(n, k) <= 2**n:
        k += 1
    return k


# first 60 decimals of pi and e, as published
PI_DIGITS = "3.14159265358979323846264338327950288419716939937510582097494459"
E_DIGITS = "2.71828182845904523536028747135266249775724709369995957496696762"


def digit_bracket(digits: str) -> tuple[Fraction, Fraction]:
    """Rational bracket [d, d + ulp] around a truncated decimal expansion."""
    value = Fraction(digits)
    ulp = Fraction(1, 10 ** len(digits.split(".")[1]))
    return value, value + ulp
