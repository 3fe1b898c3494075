from __future__ import annotations

import dataclasses
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binombounds.bounds import REGISTRY, BoundId, lemma22_check, resolve
from binombounds.exactnum import DomainError
from binombounds.rigor import exact_verdict
from binombounds.verify import (
    QUICK_SUITE,
    SUITE,
    SweepOptions,
    SweepReport,
    effective_tuples,
    lemma22_small_k_probe,
    regression_suite,
    reports_from_json,
    reports_to_json,
    stanica_reading,
    sweep,
)


def corrupted_thm21(n, k, *, mode=None, cap_bits=None):
    """thm21_rational with the factor weakened to 1 - 5(k-1)/(6n)."""
    lhs = 6 * n * comb(n, k) * k**k * (n - k) ** (n - k)
    rhs = (6 * n - 5 * (k - 1)) * n * (n - 1) ** (n - 1)
    return exact_verdict(lhs, rhs, True, (n, k))


CORRUPTED = dataclasses.replace(REGISTRY[BoundId.THM21_RATIONAL], check=corrupted_thm21)


def test_lemma22_desk_range():
    report = sweep("lemma22", {"k": (80, 200), "r": (0, 4)})
    assert (report.total_checks, report.holds, report.fails, report.undecided) == (605, 605, 0, 0)


def test_lemma23_and_thm21_small_sweeps():
    assert sweep("lemma23", {"n": (1, 64), "k": (0, 64)}).fails == 0
    report = sweep("thm21", {"n": (4, 200), "k": (2, 100)})
    assert report.fails == 0 and report.total_checks == sum(n // 2 - 1 for n in range(4, 201))


def brute_force_count(bound, ranges):
    spec = resolve(bound)
    names = spec.params
    boxes = [range(ranges[p][0], ranges[p][1] + 1) for p in names]

    def rec(i, prefix):
        if i == len(names):
            try:
                spec.check(*prefix, cap_bits=64)
            except DomainError:
                return 0
            return 1
        return sum(rec(i + 1, prefix + (v,)) for v in boxes[i])

    return rec(0, ())


@settings(max_examples=25)
@given(st.integers(1, 30), st.integers(0, 30), st.integers(-3, 30), st.integers(0, 30))
def test_clipping_matches_hypothesis_gate(n_lo, n_span, k_lo, k_span):
    ranges = {"n": (n_lo, n_lo + n_span), "k": (k_lo, k_lo + k_span)}
    for bound in ("thm21_rational", "lemma23", "lemma21_ratio"):
        expected = brute_force_count(bound, ranges)
        got = sum(1 for _ in effective_tuples(resolve(bound), ranges))
        assert got == expected
        if expected:
            assert sweep(bound, ranges).total_checks == expected
        else:
            with pytest.raises(DomainError):
                sweep(bound, ranges)


def test_three_parameter_clipping():
    ranges = {"m": (2, 7), "r": (0, 8), "n": (1, 40)}
    assert sweep("ineq26", ranges).total_checks == brute_force_count("ineq26", ranges)


def test_unknown_parameter_and_unbounded_ranges():
    with pytest.raises(DomainError):
        sweep("thm21", {"n": (4, 10), "q": (1, 2)})
    with pytest.raises(DomainError):
        sweep("thm21", {"k": (2, 5)})


def test_parallel_sweep_is_deterministic():
    opts = SweepOptions(chunk_size=97)
    serial = sweep(CORRUPTED, {"n": (4, 120), "k": (2, 60)}, opts)
    for bound, ranges in (("thm21", {"n": (4, 150), "k": (2, 75)}), ("thm22", {"n": (1, 60), "k": (0, 60)})):
        a = sweep(bound, ranges, opts)
        b = sweep(bound, ranges, dataclasses.replace(opts, parallelism=3))
        assert a.to_text(with_time=False) == b.to_text(with_time=False)
    assert serial.fails > 0


def test_parallel_witnesses_match_serial():
    # the printed Stanica reading fails often, which exercises witness merging
    ranges = {"m": (2, 6), "p": (1, 5), "n": (1, 12)}
    opts = SweepOptions(chunk_size=5, witness_cap=20)
    a = sweep(BoundId.STANICA_LOWER_PRINTED, ranges, opts)
    b = sweep(BoundId.STANICA_LOWER_PRINTED, ranges, dataclasses.replace(opts, parallelism=2))
    assert a.fails > 20 and a.witnesses == b.witnesses and a.fails == b.fails
    assert a.witnesses == sorted(a.witnesses)


def test_witness_list_is_lexicographically_first():
    spec = dataclasses.replace(
        REGISTRY[BoundId.LEMMA22],
        limits=(lambda: (1, None), lambda k: (0, 4)),
        check=lambda k, r, **_: lemma22_check(k, r, probe=True),
    )
    report = sweep(spec, {"k": (1, 79), "r": (0, 4)}, SweepOptions(chunk_size=7, witness_cap=20))
    probe = lemma22_small_k_probe()
    assert report.fails == len(probe)
    assert report.witnesses == sorted(probe)[:20]


def test_mutation_is_detected():
    report = sweep(CORRUPTED, {"n": (4, 200), "k": (2, 100)})
    assert report.fails > 0 and report.witnesses
    n, k = report.witnesses[0]
    assert corrupted_thm21(n, k).fails
    assert len(report.witnesses) <= 100


def test_report_invariants():
    with pytest.raises(ValueError):
        SweepReport("x", "", 3, 1, 1, [(1,)], 0, [], 0.0, 0)
    with pytest.raises(ValueError):
        SweepReport("x", "", 2, 1, 1, [], 0, [], 0.0, 0)


def test_structured_round_trip():
    reports = regression_suite(quick=True)
    again = reports_from_json(reports_to_json(reports))
    assert again == reports
    with pytest.raises(ValueError):
        reports_from_json('{"format": "other", "version": 1, "reports": []}')


def test_quick_suite_is_idempotent_and_clean():
    a = regression_suite(quick=True)
    b = regression_suite(quick=True)
    assert [r.to_text(with_time=False) for r in a] == [r.to_text(with_time=False) for r in b]
    assert all(r.fails == 0 and r.undecided == 0 for r in a)
    assert {b for b, _ in QUICK_SUITE} == {b for b, _ in SUITE}


def test_low_precision_cap_gives_undecided_never_fails():
    opts = SweepOptions(precision_cap=64)
    reports = regression_suite(opts, quick=True)
    # full-range transcendental entries small enough for a unit test
    for bound, ranges in SUITE:
        if not REGISTRY[bound].exact and bound not in (BoundId.THM22,):
            reports.append(sweep(bound, ranges, opts))
    assert all(r.fails == 0 for r in reports)
    assert sum(r.undecided for r in reports) > 0
    assert all(r.max_precision_used <= 64 for r in reports)


def test_suite_covers_every_registered_bound_except_printed_probes():
    covered = {b for b, _ in SUITE}
    missing = set(REGISTRY) - covered
    assert missing == {BoundId.STANICA_LOWER_PRINTED, BoundId.STANICA_UPPER_PRINTED}


def test_stanica_reading_selects_the_pp_form():
    result = stanica_reading(m_max=4, n_max=6)
    assert result["verified"] == ["classical"]
    lower_printed = result["reports"]["printed"][0]
    assert lower_printed.fails > 0 and (3, 2, 1) in lower_printed.witnesses
