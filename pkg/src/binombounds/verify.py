"""Sweep engine: run a bound's checks over a parameter box and aggregate.

The swept region is the requested box intersected with the bound's
hypothesis region. Reports are deterministic: tuples are enumerated in
lexicographic order, chunks are merged in submission order, and witness
lists are sorted, so the worker count never changes the result.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .bounds import REGISTRY, BoundId, BoundSpec, lemma22_check, resolve
from .exactnum import DomainError
from .rigor import DEFAULT_CAP_BITS, Interval, Status, Verdict, decimal_digits, format_decimal

Ranges = Mapping[str, tuple[int, int]]

REPORT_FORMAT = "binombounds.sweep"
REPORT_VERSION = 1


@dataclass(frozen=True)
class SweepOptions:
    parallelism: int = 1
    precision_cap: int = DEFAULT_CAP_BITS
    witness_cap: int = 100
    mode: Optional[str] = None
    chunk_size: int = 2048


@dataclass
class SweepReport:
    bound: str
    range_description: str
    total_checks: int
    holds: int
    fails: int
    witnesses: list[tuple[int, ...]]
    undecided: int
    undecided_params: list[tuple[int, ...]]
    wall_time: float
    max_precision_used: int

    def __post_init__(self):
        if self.holds + self.fails + self.undecided != self.total_checks:
            raise ValueError("verdict counts do not add up to total_checks")
        if self.fails and not self.witnesses:
            raise ValueError("failing report without witnesses")

    @property
    def ok(self) -> bool:
        return self.fails == 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["witnesses"] = [list(w) for w in self.witnesses]
        d["undecided_params"] = [list(u) for u in self.undecided_params]
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "SweepReport":
        d = dict(d)
        d["witnesses"] = [tuple(w) for w in d["witnesses"]]
        d["undecided_params"] = [tuple(u) for u in d["undecided_params"]]
        return cls(**d)

    def to_text(self, with_time: bool = True) -> str:
        line = (
            f"bound={self.bound} range=\"{self.range_description}\" total={self.total_checks} "
            f"holds={self.holds} fails={self.fails} undecided={self.undecided} "
            f"max_precision={self.max_precision_used}"
        )
        if with_time:
            line += f" wall_time={self.wall_time:.3f}s"
        lines = [line]
        lines += [f"  fail {_fmt_params(w)}" for w in self.witnesses]
        lines += [f"  undecided {_fmt_params(u)}" for u in self.undecided_params]
        return "\n".join(lines)


def _fmt_params(values: Sequence[int]) -> str:
    return ",".join(str(v) for v in values)


@dataclass(frozen=True)
class CheckRow:
    """One check, rendered for CSV output."""

    params: tuple[int, ...]
    status: str
    margin_lo: str
    margin_hi: str
    precision_bits: int


def margin_strings(margin) -> tuple[str, str]:
    """Margin endpoints as text; exact margins are printed in full."""
    if margin is None:
        return "", ""
    if isinstance(margin, Interval):
        digits = decimal_digits(margin.prec)
        return format_decimal(margin.lo, digits, up=False), format_decimal(margin.hi, digits, up=True)
    s = str(Fraction(margin))
    return s, s


def reports_to_json(reports: Iterable[SweepReport], **extra) -> str:
    doc = {"format": REPORT_FORMAT, "version": REPORT_VERSION, **extra,
           "reports": [r.to_dict() for r in reports]}
    return json.dumps(doc, indent=2, sort_keys=True)


def reports_from_json(text: str) -> list[SweepReport]:
    doc = json.loads(text)
    if doc.get("format") != REPORT_FORMAT or doc.get("version") != REPORT_VERSION:
        raise ValueError("not a binombounds sweep report")
    return [SweepReport.from_dict(r) for r in doc["reports"]]


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _requested(spec: BoundSpec, ranges: Ranges) -> list[Optional[tuple[int, int]]]:
    unknown = set(ranges) - set(spec.params)
    if unknown:
        raise DomainError(f"{spec.id.value} has no parameter(s) {sorted(unknown)}; expects {spec.params}")
    out = []
    for name in spec.params:
        r = ranges.get(name)
        if r is not None and r[0] > r[1]:
            raise DomainError(f"empty range for {name}: {r[0]}..{r[1]}")
        out.append(None if r is None else (int(r[0]), int(r[1])))
    return out


def effective_tuples(spec: BoundSpec, ranges: Ranges) -> Iterator[tuple[int, ...]]:
    """Parameter tuples in ``ranges`` that satisfy the hypothesis, in lexicographic order."""
    requested = _requested(spec, ranges)
    depth = len(spec.params)

    def walk(prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        i = len(prefix)
        if i == depth:
            if spec.condition is None or spec.condition(*prefix):
                yield prefix
            return
        lo, hi = spec.limits[i](*prefix)
        req = requested[i]
        if req is not None:
            lo = max(lo, req[0])
            hi = req[1] if hi is None else min(hi, req[1])
        elif hi is None:
            raise DomainError(f"a range for {spec.params[i]} is required ({spec.id.value})")
        for v in range(lo, hi + 1):
            yield from walk(prefix + (v,))

    return walk(())


def describe_ranges(spec: BoundSpec, ranges: Ranges) -> str:
    parts = []
    for name in spec.params:
        r = ranges.get(name)
        parts.append(f"{name}={r[0]}..{r[1]}" if r is not None else f"{name}=*")
    return " ".join(parts) + f" & hypothesis({spec.hypothesis})"


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


@dataclass
class _Partial:
    holds: int = 0
    fails: int = 0
    witnesses: list = field(default_factory=list)
    undecided: list = field(default_factory=list)
    max_prec: int = 0
    rows: list = field(default_factory=list)


def _run_chunk(spec: BoundSpec, chunk: Sequence[tuple[int, ...]], mode, cap, witness_cap, want_rows) -> _Partial:
    part = _Partial()
    for params in chunk:
        v: Verdict = spec.check(*params, mode=mode, cap_bits=cap)
        if v.status is Status.HOLDS:
            part.holds += 1
        elif v.status is Status.FAILS:
            part.fails += 1
            if len(part.witnesses) < witness_cap:
                part.witnesses.append(tuple(int(x) for x in params))
        else:
            part.undecided.append(tuple(int(x) for x in params))
        part.max_prec = max(part.max_prec, v.precision_used)
        if want_rows:
            lo, hi = margin_strings(v.margin)
            part.rows.append(CheckRow(tuple(int(x) for x in params), v.status.value, lo, hi, v.precision_used))
    return part


def _run_registered_chunk(payload) -> _Partial:
    bound, chunk, mode, cap, witness_cap, want_rows = payload
    return _run_chunk(REGISTRY[BoundId(bound)], chunk, mode, cap, witness_cap, want_rows)


def _chunks(it: Iterator[tuple[int, ...]], size: int) -> Iterator[list[tuple[int, ...]]]:
    while True:
        chunk = list(islice(it, size))
        if not chunk:
            return
        yield chunk


def sweep(
    bound: BoundId | str | BoundSpec,
    ranges: Ranges,
    options: SweepOptions = SweepOptions(),
    rows: Optional[list[CheckRow]] = None,
) -> SweepReport:
    """Check every in-hypothesis tuple of ``ranges`` and aggregate the verdicts.

    ``bound`` may be a registered id/alias or a custom :class:`BoundSpec`
    (custom specs always run in-process). When ``rows`` is a list, one
    :class:`CheckRow` per check is appended to it in tuple order.
    """
    spec = bound if isinstance(bound, BoundSpec) else resolve(bound)
    start = time.perf_counter()
    tuples = effective_tuples(spec, ranges)
    chunks = _chunks(tuples, options.chunk_size)
    first = next(chunks, None)
    if first is None:
        raise DomainError(f"empty effective range for {spec.id.value}: {describe_ranges(spec, ranges)}")
    all_chunks = _prepend(first, chunks)
    want_rows = rows is not None
    registered = REGISTRY.get(spec.id) is spec
    args = (options.mode, options.precision_cap, options.witness_cap, want_rows)

    if options.parallelism > 1 and registered:
        with ProcessPoolExecutor(max_workers=options.parallelism) as pool:
            payloads = ((spec.id.value, c, *args) for c in all_chunks)
            partials = list(pool.map(_run_registered_chunk, payloads))
    else:
        partials = [_run_chunk(spec, c, *args) for c in all_chunks]

    holds = sum(p.holds for p in partials)
    fails = sum(p.fails for p in partials)
    witnesses = sorted(w for p in partials for w in p.witnesses)[: options.witness_cap]
    undecided = sorted(u for p in partials for u in p.undecided)
    if want_rows:
        for p in partials:
            rows.extend(p.rows)
    return SweepReport(
        bound=spec.id.value,
        range_description=describe_ranges(spec, ranges),
        total_checks=holds + fails + len(undecided),
        holds=holds,
        fails=fails,
        witnesses=witnesses,
        undecided=len(undecided),
        undecided_params=undecided,
        wall_time=time.perf_counter() - start,
        max_precision_used=max(p.max_prec for p in partials),
    )


def _prepend(first, rest):
    yield first
    yield from rest


# ---------------------------------------------------------------------------
# Canonical suite
# ---------------------------------------------------------------------------

# desk-scale ranges; the quick variant keeps every bound but shrinks the boxes
SUITE: list[tuple[BoundId, dict[str, tuple[int, int]]]] = [
    (BoundId.ROBBINS_LOWER, {"n": (1, 1000)}),
    (BoundId.ROBBINS_UPPER, {"n": (1, 1000)}),
    (BoundId.EQ12_UPPER, {"m": (2, 10), "n": (1, 200)}),
    (BoundId.HIRSCHHORN_LOWER, {"n": (2, 1000)}),
    (BoundId.HIRSCHHORN_UPPER, {"n": (2, 1000)}),
    (BoundId.HIRSCHHORN_REMAINDER, {"n": (2, 1000)}),
    (BoundId.STANICA_LOWER, {"m": (2, 8), "p": (1, 7), "n": (1, 100)}),
    (BoundId.STANICA_UPPER, {"m": (2, 8), "p": (1, 7), "n": (1, 100)}),
    (BoundId.THM21_RATIONAL, {"n": (4, 2000), "k": (2, 1000)}),
    (BoundId.THM21_EXP, {"n": (4, 300), "k": (2, 150)}),
    (BoundId.THM22, {"n": (1, 2000), "k": (0, 2000)}),
    (BoundId.THM22_WEAK, {"n": (1, 2000), "k": (0, 2000)}),
    (BoundId.THM23, {"m": (3, 10), "n": (3, 500)}),
    (BoundId.THM24_RATIONAL, {"n": (400, 1200), "k": (80, 600)}),
    (BoundId.THM24_EXP, {"n": (400, 600), "k": (80, 300)}),
    (BoundId.THM24_POW2, {"n": (400, 1200), "k": (80, 600)}),
    (BoundId.COROLLARY21, {"n": (400, 1200), "k": (80, 960)}),
    (BoundId.LEMMA21_RATIO, {"n": (3, 300), "k": (0, 149)}),
    (BoundId.LEMMA22, {"k": (80, 200), "r": (0, 4)}),
    (BoundId.LEMMA23, {"n": (1, 64), "k": (0, 64)}),
    (BoundId.INEQ21, {"m": (1, 1000)}),
    (BoundId.INEQ23, {"m": (2, 1000)}),
    (BoundId.INEQ25, {"n": (4, 300), "k": (2, 150)}),
    (BoundId.INEQ26, {"m": (3, 10), "r": (1, 9), "n": (1, 200)}),
    (BoundId.INEQ27, {"k": (201, 1000), "r": (2, 4)}),
    (BoundId.INEQ28, {"n": (6, 2000)}),
]

QUICK_SUITE: list[tuple[BoundId, dict[str, tuple[int, int]]]] = [
    (BoundId.ROBBINS_LOWER, {"n": (1, 60)}),
    (BoundId.ROBBINS_UPPER, {"n": (1, 60)}),
    (BoundId.EQ12_UPPER, {"m": (2, 5), "n": (1, 20)}),
    (BoundId.HIRSCHHORN_LOWER, {"n": (2, 60)}),
    (BoundId.HIRSCHHORN_UPPER, {"n": (2, 60)}),
    (BoundId.HIRSCHHORN_REMAINDER, {"n": (2, 60)}),
    (BoundId.STANICA_LOWER, {"m": (2, 5), "p": (1, 4), "n": (1, 10)}),
    (BoundId.STANICA_UPPER, {"m": (2, 5), "p": (1, 4), "n": (1, 10)}),
    (BoundId.THM21_RATIONAL, {"n": (4, 60), "k": (2, 30)}),
    (BoundId.THM21_EXP, {"n": (4, 40), "k": (2, 20)}),
    (BoundId.THM22, {"n": (1, 60), "k": (0, 60)}),
    (BoundId.THM22_WEAK, {"n": (1, 60), "k": (0, 60)}),
    (BoundId.THM23, {"m": (3, 6), "n": (3, 60)}),
    (BoundId.THM24_RATIONAL, {"n": (400, 403), "k": (80, 201)}),
    (BoundId.THM24_EXP, {"n": (400, 401), "k": (80, 200)}),
    (BoundId.THM24_POW2, {"n": (400, 403), "k": (80, 201)}),
    (BoundId.COROLLARY21, {"n": (400, 401), "k": (80, 320)}),
    (BoundId.LEMMA21_RATIO, {"n": (3, 40), "k": (0, 19)}),
    (BoundId.LEMMA22, {"k": (80, 90), "r": (0, 4)}),
    (BoundId.LEMMA23, {"n": (1, 20), "k": (0, 20)}),
    (BoundId.INEQ21, {"m": (1, 50)}),
    (BoundId.INEQ23, {"m": (2, 50)}),
    (BoundId.INEQ25, {"n": (4, 40), "k": (2, 20)}),
    (BoundId.INEQ26, {"m": (3, 6), "r": (1, 5), "n": (1, 40)}),
    (BoundId.INEQ27, {"k": (201, 230), "r": (2, 4)}),
    (BoundId.INEQ28, {"n": (6, 200)}),
]


def regression_suite(options: SweepOptions = SweepOptions(), quick: bool = False) -> list[SweepReport]:
    """Sweep every registered bound (except the printed-form probes) at its canonical range."""
    return [sweep(bound, ranges, options) for bound, ranges in (QUICK_SUITE if quick else SUITE)]


def stanica_reading(
    m_max: int = 8, n_max: int = 100, options: SweepOptions = SweepOptions()
) -> dict[str, object]:
    """Sweep both readings of the Stanica bounds and report which one survives."""
    box = {"m": (2, m_max), "p": (1, m_max - 1), "n": (1, n_max)}
    reports = {
        "classical": [sweep(BoundId.STANICA_LOWER, box, options), sweep(BoundId.STANICA_UPPER, box, options)],
        "printed": [
            sweep(BoundId.STANICA_LOWER_PRINTED, box, options),
            sweep(BoundId.STANICA_UPPER_PRINTED, box, options),
        ],
    }
    verified = [name for name, reps in reports.items() if all(r.ok and r.undecided == 0 for r in reps)]
    return {"reports": reports, "verified": verified}


def lemma22_small_k_probe(k_max: int = 79) -> list[tuple[int, int]]:
    """(k, r) pairs with 1 <= k <= k_max where the exact lemma22 comparison fails."""
    return [
        (k, r)
        for k in range(1, k_max + 1)
        for r in range(5)
        if lemma22_check(k, r, probe=True).fails
    ]
