"""f(n), the window (2^n/(n+1), 2^n/n] and resumable scans for hits in it.

f(n) is the least positive k with C(n, k) > 2^n / (n+1). A pair (n, k) with
k <= n/2 "hits" the window when 2^n/(n+1) < C(n, k) <= 2^n/n; for n >= 6
such a k is necessarily f(n), which is what :func:`certify_f` checks.
"""

from __future__ import annotations

import json
import os
import random
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from gmpy2 import mpz

from . import rigor
from .exactnum import DomainError, binomial
from .rigor import Interval

FORMAT_VERSION = 1
DEFAULT_SCAN_ID = "window-pairs"
STRICT = "strict"
NON_STRICT = "non_strict"


class ConsistencyError(AssertionError):
    """A certified pair disagrees with the directly computed f(n)."""


class CheckpointError(ValueError):
    """A checkpoint file is malformed, of the wrong version, or inconsistent."""


def f_of_n(n: int) -> int:
    """Least k >= 1 with (n+1) C(n, k) > 2^n, by binary search on [1, ceil(n/2)]."""
    if n < 3:
        raise DomainError(f"f(n) is defined for n >= 3, got {n}")
    target = mpz(2) ** n
    lo, hi = 1, (n + 1) // 2
    # C(n, k) is nondecreasing on [1, ceil(n/2)] and (n+1) C(n, ceil(n/2)) > 2^n
    while lo < hi:
        mid = (lo + hi) // 2
        if (n + 1) * binomial(n, mid) > target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def in_window(n: int, k: int) -> bool:
    """2^n/(n+1) < C(n, k) <= 2^n/n, decided in integers."""
    c, t = binomial(n, k), mpz(2) ** n
    return (n + 1) * c > t and n * c <= t


def certify_f(n: int, k: int) -> bool:
    """Whether (n, k) hits the window; a hit is cross-checked against f(n).

    Requires n >= 6 and k <= n/2.
    """
    if n < 6 or k < 0 or 2 * k > n:
        raise DomainError(f"certification needs n >= 6 and 0 <= k <= n/2, got ({n}, {k})")
    if not in_window(n, k):
        return False
    f = f_of_n(n)
    if f != k:
        raise ConsistencyError(f"({n}, {k}) hits the window but f({n}) = {f}")
    return True


thm25_certify = certify_f


@dataclass(frozen=True)
class PairRecord:
    n: int
    k: int
    binom: int
    window_low: Fraction
    window_high: Fraction
    strict_upper: bool
    certified_f: bool

    def __post_init__(self):
        if not self.window_low < self.binom <= self.window_high:
            raise ValueError(f"({self.n}, {self.k}) is not inside its window")
        if self.strict_upper != (self.n * self.binom != 2**self.n):
            raise ValueError(f"strict_upper flag wrong for ({self.n}, {self.k})")
        if self.certified_f and not (self.n >= 6 and 2 * self.k <= self.n):
            raise ValueError(f"({self.n}, {self.k}) cannot be certified")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "binom": str(self.binom),
            "window_low": str(self.window_low),
            "window_high": str(self.window_high),
            "strict_upper": self.strict_upper,
            "certified_f": self.certified_f,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PairRecord":
        return cls(
            n=int(d["n"]),
            k=int(d["k"]),
            binom=int(d["binom"]),
            window_low=Fraction(d["window_low"]),
            window_high=Fraction(d["window_high"]),
            strict_upper=bool(d["strict_upper"]),
            certified_f=bool(d["certified_f"]),
        )

    def csv_line(self) -> str:
        return f"{self.n},{self.k},{self.binom},{str(self.strict_upper).lower()},{str(self.certified_f).lower()}"


def pair_at(n: int) -> Optional[PairRecord]:
    """The window hit at n, if any (k = f(n) for n >= 3, k = 1 for n = 2)."""
    if n < 2:
        raise DomainError("the window scan starts at n = 2")
    k = 1 if n == 2 else f_of_n(n)
    if not in_window(n, k):
        return None
    c = binomial(n, k)
    return PairRecord(
        n=n,
        k=k,
        binom=int(c),
        window_low=Fraction(2**n, n + 1),
        window_high=Fraction(2**n, n),
        strict_upper=n * c != 2**n,
        certified_f=n >= 6 and certify_f(n, k),
    )


def _scan_block(bounds: tuple[int, int]) -> list[PairRecord]:
    lo, hi = bounds
    return [p for n in range(lo, hi + 1) if (p := pair_at(n)) is not None]


@dataclass(frozen=True)
class Checkpoint:
    scan_id: str
    last_completed_n: int
    pairs: tuple[PairRecord, ...]
    format_version: int = FORMAT_VERSION

    def to_json(self) -> str:
        return json.dumps(
            {
                "format_version": self.format_version,
                "scan_id": self.scan_id,
                "last_completed_n": self.last_completed_n,
                "pairs": [p.to_dict() for p in self.pairs],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str, *, sample: int = 16) -> "Checkpoint":
        """Parse and integrity-check a checkpoint.

        Up to ``sample`` stored pairs (chosen by a generator seeded from the
        scan id) are recomputed from scratch.
        """
        try:
            doc = json.loads(text)
            version = int(doc["format_version"])
            if version != FORMAT_VERSION:
                raise CheckpointError(f"unsupported checkpoint version {version}")
            ckpt = cls(
                scan_id=str(doc["scan_id"]),
                last_completed_n=int(doc["last_completed_n"]),
                pairs=tuple(PairRecord.from_dict(p) for p in doc["pairs"]),
                format_version=version,
            )
        except CheckpointError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointError(f"malformed checkpoint: {exc}") from exc
        ckpt.validate(sample=sample)
        return ckpt

    def validate(self, sample: int = 16) -> None:
        if self.last_completed_n < 1:
            raise CheckpointError("last_completed_n must be positive")
        ns = [p.n for p in self.pairs]
        if ns != sorted(set(ns)):
            raise CheckpointError("pairs are not strictly increasing in n")
        if ns and (ns[0] < 2 or ns[-1] > self.last_completed_n):
            raise CheckpointError("pair outside the completed range")
        rng = random.Random(f"{self.scan_id}:{self.last_completed_n}")
        for p in rng.sample(self.pairs, min(sample, len(self.pairs))):
            if pair_at(p.n) != p:
                raise CheckpointError(f"stored pair ({p.n}, {p.k}) does not recompute")

    def save(self, path: str | os.PathLike) -> None:
        path = Path(path)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(self.to_json())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | os.PathLike, *, sample: int = 16) -> "Checkpoint":
        return cls.from_json(Path(path).read_text(), sample=sample)


def scan_pairs(
    n_max: int,
    checkpoint: Optional[Checkpoint] = None,
    *,
    block_size: int = 100,
    workers: int = 1,
    on_checkpoint: Optional[Callable[[Checkpoint], None]] = None,
    scan_id: str = DEFAULT_SCAN_ID,
) -> tuple[list[PairRecord], Checkpoint]:
    """All window hits with 2 <= n <= n_max, resuming from ``checkpoint``.

    ``on_checkpoint`` is called with a fresh checkpoint after every block of
    ``block_size`` values of n; blocks are scanned by up to ``workers``
    processes and merged in order.
    """
    if n_max < 2:
        raise DomainError("n_max must be at least 2")
    pairs: list[PairRecord] = []
    start = 2
    if checkpoint is not None:
        if checkpoint.scan_id != scan_id:
            raise CheckpointError(f"checkpoint belongs to scan {checkpoint.scan_id!r}, not {scan_id!r}")
        pairs = [p for p in checkpoint.pairs if p.n <= n_max]
        start = checkpoint.last_completed_n + 1
    blocks = [(lo, min(lo + block_size - 1, n_max)) for lo in range(start, n_max + 1, block_size)]
    last = min(start - 1, n_max) if checkpoint is not None else 1

    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results: Iterable[list[PairRecord]] = pool.map(_scan_block, blocks)
            last = _collect(blocks, results, pairs, scan_id, on_checkpoint, last)
    else:
        last = _collect(blocks, map(_scan_block, blocks), pairs, scan_id, on_checkpoint, last)
    return pairs, Checkpoint(scan_id, max(last, 1), tuple(pairs))


def _collect(blocks, results, pairs, scan_id, on_checkpoint, last) -> int:
    for (_, hi), found in zip(blocks, results):
        pairs.extend(found)
        last = hi
        if on_checkpoint is not None:
            on_checkpoint(Checkpoint(scan_id, hi, tuple(pairs)))
    return last


def count_hits(pairs: Iterable[PairRecord], x: int, strictness: str = STRICT) -> int:
    """#{3 <= n <= x : C(n, f(n)) < 2^n/n} (strict) or with <= (non_strict)."""
    if strictness not in (STRICT, NON_STRICT):
        raise ValueError(f"unknown strictness {strictness!r}")
    return sum(1 for p in pairs if 3 <= p.n <= x and (p.strict_upper or strictness == NON_STRICT))


def c23_target(prec: int = 64) -> Interval:
    """Enclosure of the cube root of pi/2."""
    return rigor.rootn(rigor.pi(prec) / 2, 3)


def c23_statistic(
    x: int,
    strictness: str = STRICT,
    *,
    prec: int = 64,
    pairs: Optional[Sequence[PairRecord]] = None,
) -> tuple[int, Interval, Interval]:
    """(count, count / sqrt(x / log x), (pi/2)^(1/3)) for the window hits up to x."""
    if x < 3:
        raise DomainError("the statistic needs x >= 3")
    if pairs is None:
        pairs, _ = scan_pairs(x)
    count = count_hits(pairs, x, strictness)
    xs = Interval.exact(x, prec)
    statistic = rigor.sqrt(rigor.log(xs) / xs) * count
    return count, statistic, c23_target(prec)
