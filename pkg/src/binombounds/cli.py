"""Command-line front end: ``binombounds {eval,check,verify,f,scan,stat}``.

Exit status: 0 all checks hold, 1 some check fails, 2 usage or domain error,
3 undecided checks present while ``--strict-undecided`` is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__, bounds, search
from .bounds import ALIASES, EXACT, INTERVAL, REGISTRY, resolve
from .exactnum import DomainError, binomial, factorial, self_power
from .rigor import DEFAULT_CAP_BITS, Interval, decimal_digits, format_decimal
from .rigor import exp as iexp
from .rigor import sqrt as isqrt
from .verify import (
    QUICK_SUITE,
    SUITE,
    CheckRow,
    SweepOptions,
    margin_strings,
    reports_to_json,
    sweep,
)

ENV_PRECISION_CAP = "BINOMBOUNDS_PRECISION_CAP"
ENV_PARALLEL = "BINOMBOUNDS_PARALLEL"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2, 3

RANGE_PARAMS = ("n", "k", "m", "p", "r")


def parse_range(text: str) -> tuple[int, int]:
    """``"lo..hi"`` or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed range {text!r}; expected lo..hi") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"{name} must be an integer, got {raw!r}") from None


def _cap(args) -> int:
    return args.precision_cap if args.precision_cap is not None else _env_int(ENV_PRECISION_CAP, DEFAULT_CAP_BITS)


def _parallel(args) -> int:
    return args.parallel if args.parallel is not None else _env_int(ENV_PARALLEL, 1)


def _value_text(value) -> str:
    if isinstance(value, Interval):
        d = decimal_digits(value.prec)
        return f"[{format_decimal(value.lo, d, up=False)}, {format_decimal(value.hi, d, up=True)}]"
    return str(Fraction(value)) if isinstance(value, Fraction) else str(int(value))


def _value_json(value):
    if isinstance(value, Interval):
        d = decimal_digits(value.prec)
        return {"lo": format_decimal(value.lo, d, up=False), "hi": format_decimal(value.hi, d, up=True),
                "precision_bits": value.prec}
    return {"exact": _value_text(value)}


def _emit_record(out, args, command: Sequence[str], params: dict, payload: dict, precision: int, started: float):
    record = {
        "command": list(command),
        "parameters": params,
        "payload": payload,
        "precision_used": precision,
        "wall_time": round(time.perf_counter() - started, 6),
        "version": __version__,
    }
    if args.format == "structured":
        out.write(json.dumps(record, indent=2, sort_keys=True) + "\n")
        return
    out.write(f"# binombounds {__version__}: {' '.join(command)}\n")
    for key, value in payload.items():
        out.write(f"{key} = {value if isinstance(value, str) else _render(value)}\n")
    out.write(f"# precision_used={precision} wall_time={record['wall_time']:.6f}s\n")


def _render(value) -> str:
    if isinstance(value, dict):
        if "exact" in value:
            return value["exact"]
        return f"[{value['lo']}, {value['hi']}]"
    return str(value)


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def _eval_robbins(n, prec):
    lower, upper = bounds.robbins_bounds(n, prec)
    return {"lower": lower, "factorial": factorial(n), "upper": upper}


def _eval_eq12(m, n, prec):
    return {"binomial": binomial(m * n, n), "upper": bounds.eq12_upper(m, n, prec)}


def _eval_hirschhorn(n, prec):
    lower, upper, r_n = bounds.hirschhorn_bounds(n, prec)
    return {"lower": lower, "factorial": factorial(n), "upper": upper, "remainder_r": r_n}


def _eval_stanica(m, p, n, prec):
    lo, hi = bounds.stanica_bounds(m, p, n, prec, "classical")
    plo, phi = bounds.stanica_bounds(m, p, n, prec, "printed")
    return {"lower": lo, "binomial": binomial(m * n, p * n), "upper": hi, "lower_printed": plo, "upper_printed": phi}


def _eval_thm21(n, k, prec):
    bounds.thm21_check(n, k)  # hypothesis gate
    kk = self_power(k) * self_power(n - k)
    top = n * self_power(n - 1)
    return {
        "binomial": binomial(n, k),
        "exp_form": bounds.thm21_exp_form(n, k, prec),
        "rational_form": Fraction((6 * n * n - 5 * (k - 1)) * top, 6 * n * n * kk),
    }


def _eval_thm22(n, k, prec):
    if not (n >= 1 and 0 <= k <= n):
        raise DomainError("thm22 needs n >= 1 and 0 <= k <= n")
    return {
        "binomial": binomial(n, k),
        "bound": bounds.thm22_bound(n, prec),
        "weak_bound": Interval.exact(Fraction(4, 5) * 2**n, prec) / isqrt(Interval.exact(n, prec)),
    }


def _eval_thm23(m, n, prec):
    bounds.thm23_check(m, n, cap_bits=64)
    return {"binomial": binomial(n, n // m), "bound": bounds.thm23_bound(m, n, prec)}


def _eval_thm24(n, k, prec):
    bounds.thm24_check(n, k)
    d = k - n // 5
    kk = Interval.exact(self_power(k) * self_power(n - k), prec)
    factor = Interval.exact(Fraction(6 * n * n - 5 * d, 6 * n * n), prec)
    root_n = isqrt(Interval.exact(n, prec))
    return {
        "binomial": binomial(n, k),
        "exp_form": bounds.thm24_exp_form(n, k, prec),
        "rational_form": factor * Interval.exact(self_power(n), prec) / (root_n * kk),
        "pow2_form": factor * Interval.exact(2**n, prec) / root_n,
    }


def _eval_corollary21(n, k, prec):
    bounds.corollary21_check(n, k)
    kk = Interval.exact(self_power(k) * self_power(n - k), prec)
    return {
        "binomial": binomial(n, k),
        "bound": Interval.exact(self_power(n), prec) / (isqrt(Interval.exact(n, prec)) * kk),
    }


def _eval_lemma21(n, k, prec):
    bounds.lemma21_check(n, k, cap_bits=64)
    return {
        "left": binomial(n, k) * self_power(k) * self_power(n - k),
        "right": binomial(n, k + 1) * self_power(k + 1) * self_power(n - k - 1),
        "exp_factor": iexp(Interval.exact(Fraction(11, 12 * n * n), prec)),
    }


def _eval_lemma22(k, r, prec):
    bounds.lemma22_check(k, r)
    big = 5 * k + r
    kk = Interval.exact(self_power(k) * self_power(4 * k + r), prec)
    return {
        "binomial": binomial(big, k),
        "bound": Interval.exact(self_power(big), prec) / (isqrt(Interval.exact(big, prec)) * kk),
    }


def _eval_lemma23(n, k, prec):
    if not (n >= 1 and 0 <= k <= n):
        raise DomainError("lemma23 needs n >= 1 and 0 <= k <= n")
    return {"ratio": Fraction(self_power(n), self_power(k) * self_power(n - k)), "two_pow_n": 2**n}


EVALUATORS: dict[str, tuple[tuple[str, ...], Callable]] = {
    "robbins": (("n",), _eval_robbins),
    "eq12": (("m", "n"), _eval_eq12),
    "hirschhorn": (("n",), _eval_hirschhorn),
    "stanica": (("m", "p", "n"), _eval_stanica),
    "thm21": (("n", "k"), _eval_thm21),
    "thm22": (("n", "k"), _eval_thm22),
    "thm23": (("m", "n"), _eval_thm23),
    "thm24": (("n", "k"), _eval_thm24),
    "corollary21": (("n", "k"), _eval_corollary21),
    "lemma21": (("n", "k"), _eval_lemma21),
    "lemma22": (("k", "r"), _eval_lemma22),
    "lemma23": (("n", "k"), _eval_lemma23),
}


def cmd_eval(args, out) -> int:
    started = time.perf_counter()
    try:
        names, fn = EVALUATORS[args.bound]
    except KeyError:
        raise _Usage(f"unknown bound {args.bound!r}; choose from {', '.join(EVALUATORS)}")
    if len(args.params) != len(names):
        raise _Usage(f"{args.bound} takes {len(names)} parameter(s): {' '.join(names)}")
    values = fn(*args.params, args.precision)
    params = dict(zip(names, args.params))
    payload = {k: _value_json(v) for k, v in values.items()}
    _emit_record(out, args, ["eval", args.bound, *map(str, args.params)], params, payload, args.precision, started)
    return EXIT_OK


# ---------------------------------------------------------------------------
# check / verify
# ---------------------------------------------------------------------------


def _resolve(name: str):
    try:
        return resolve(name)
    except KeyError:
        known = ", ".join(sorted([b.value for b in REGISTRY] + list(ALIASES)))
        raise _Usage(f"unknown bound {name!r}; known ids and aliases: {known}") from None


def _verdict_exit(fails: int, undecided: int, strict_undecided: bool) -> int:
    if fails:
        return EXIT_FAIL
    if undecided and strict_undecided:
        return EXIT_UNDECIDED
    return EXIT_OK


def cmd_check(args, out) -> int:
    started = time.perf_counter()
    spec = _resolve(args.bound)
    if len(args.params) != len(spec.params):
        raise _Usage(f"{spec.id.value} takes {len(spec.params)} parameter(s): {' '.join(spec.params)}")
    v = spec.check(*args.params, mode=args.mode, cap_bits=_cap(args))
    lo, hi = margin_strings(v.margin)
    margin = {"lo": lo, "hi": hi} if isinstance(v.margin, Interval) else {"exact": lo}
    payload = {"bound": spec.id.value, "verdict": v.status.value, "margin": margin}
    if v.witness:
        payload["witness"] = ",".join(map(str, v.witness))
    params = dict(zip(spec.params, args.params))
    _emit_record(out, args, ["check", spec.id.value, *map(str, args.params)], params, payload, v.precision_used, started)
    return _verdict_exit(v.fails, v.undecided, args.strict_undecided)


def _write_csv(out, bound: str, param_names: Sequence[str], rows: Sequence[CheckRow], joined: bool):
    writer = csv.writer(out, lineterminator="\n")
    for row in rows:
        params = [";".join(f"{n}={v}" for n, v in zip(param_names, row.params))] if joined else list(row.params)
        writer.writerow([bound, *params, row.status, row.margin_lo, row.margin_hi, row.precision_bits])


def cmd_verify(args, out) -> int:
    options = SweepOptions(
        parallelism=_parallel(args),
        precision_cap=_cap(args),
        witness_cap=args.witness_cap,
        mode=args.mode,
    )
    ranges = {name: getattr(args, name) for name in RANGE_PARAMS if getattr(args, name) is not None}
    if args.target == "all":
        if ranges:
            raise _Usage("range flags cannot be combined with 'verify all'")
        targets = list(_suite(args.quick))
        joined = True
    else:
        spec = _resolve(args.target)
        targets = [(spec.id, ranges)]
        joined = False

    if args.format == "csv":
        buf = io.StringIO()
        if joined:
            csv.writer(buf, lineterminator="\n").writerow(
                ["bound", "params", "verdict", "margin_lo", "margin_hi", "precision_bits"]
            )
        else:
            csv.writer(buf, lineterminator="\n").writerow(
                ["bound", *resolve(targets[0][0]).params, "verdict", "margin_lo", "margin_hi", "precision_bits"]
            )
        reports = []
        for bound, r in targets:
            rows: list[CheckRow] = []
            reports.append(sweep(bound, r, options, rows=rows))
            spec = resolve(bound)
            _write_csv(buf, spec.id.value, spec.params, rows, joined)
        text = buf.getvalue()
    else:
        reports = [sweep(bound, r, options) for bound, r in targets]
        if args.format == "structured":
            text = reports_to_json(reports) + "\n"
        else:
            text = "\n".join(r.to_text() for r in reports) + "\n"
            total_fail = sum(r.fails for r in reports)
            total_und = sum(r.undecided for r in reports)
            text += f"# summary: {len(reports)} report(s), fails={total_fail}, undecided={total_und}\n"
    _output(args.out, out, text)
    fails = sum(r.fails for r in reports)
    undecided = sum(r.undecided for r in reports)
    if undecided:
        print(f"warning: {undecided} undecided check(s)", file=sys.stderr)
    return _verdict_exit(fails, undecided, args.strict_undecided)


def _suite(quick: bool):
    return QUICK_SUITE if quick else SUITE


def _output(path: Optional[str], out, text: str) -> None:
    if path:
        Path(path).write_text(text)
    else:
        out.write(text)


# ---------------------------------------------------------------------------
# f / scan / stat
# ---------------------------------------------------------------------------


def cmd_f(args, out) -> int:
    lo, hi = args.n
    for n in range(lo, hi + 1):
        f = search.f_of_n(n)
        line = f"f({n}) = {f}"
        if n >= 6:
            line += f" window_hit={str(search.in_window(n, f)).lower()}"
        out.write(line + "\n")
    return EXIT_OK


def _statistic_block(pairs, x: int, strictness: str, prec: int) -> str:
    count, stat, target = search.c23_statistic(x, strictness, prec=prec, pairs=pairs)
    return (
        f"# statistic x={x} strictness={strictness} precision_bits={prec}\n"
        f"# count={count}\n"
        f"# statistic=[{_bare(stat)}]\n"
        f"# target=[{_bare(target)}]\n"
    )


def _bare(iv: Interval) -> str:
    d = decimal_digits(iv.prec)
    return f"{format_decimal(iv.lo, d, up=False)}, {format_decimal(iv.hi, d, up=True)}"


def cmd_scan(args, out) -> int:
    if args.n_max < 2:
        raise DomainError("--n-max must be at least 2")
    checkpoint = None
    if args.checkpoint and Path(args.checkpoint).exists():
        checkpoint = search.Checkpoint.load(args.checkpoint)
    on_ckpt = (lambda c: c.save(args.checkpoint)) if args.checkpoint else None
    pairs, final = search.scan_pairs(
        args.n_max, checkpoint, block_size=args.block_size, workers=_parallel(args), on_checkpoint=on_ckpt
    )
    if args.checkpoint and final.last_completed_n >= args.n_max:
        final.save(args.checkpoint)
    text = "".join(p.csv_line() + "\n" for p in pairs)
    if args.n_max >= 3:
        text += _statistic_block(pairs, args.n_max, args.strictness, args.precision)
    _output(args.out, out, text)
    return EXIT_OK


def cmd_stat(args, out) -> int:
    started = time.perf_counter()
    if args.x < 3:
        raise DomainError("--x must be at least 3")
    pairs, _ = search.scan_pairs(args.x, workers=_parallel(args))
    payload = {}
    for strictness in (search.STRICT, search.NON_STRICT):
        count, stat, target = search.c23_statistic(args.x, strictness, prec=args.precision, pairs=pairs)
        payload[f"count_{strictness}"] = str(count)
        payload[f"statistic_{strictness}"] = _value_json(stat)
    payload["target_cuberoot_pi_over_2"] = _value_json(target)
    _emit_record(out, args, ["stat", "--x", str(args.x)], {"x": args.x}, payload, args.precision, started)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="binombounds", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"binombounds {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p, choices=("text", "structured")):
        p.add_argument("--format", choices=choices, default="text")

    p = sub.add_parser("eval", help="print a bound's value next to the exact quantity it bounds")
    p.add_argument("bound", help=", ".join(EVALUATORS))
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("--precision", type=int, default=128, help="bits (default 128)")
    fmt(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check", help="certify one inequality at one parameter tuple")
    p.add_argument("bound", help="bound id or alias, e.g. thm21_rational or thm21")
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("--mode", choices=(EXACT, INTERVAL), default=None)
    p.add_argument("--precision-cap", type=int, default=None)
    p.add_argument("--strict-undecided", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="sweep a bound over parameter ranges, or 'all' for the regression suite")
    p.add_argument("target", help="bound id, alias, or 'all'")
    for name in RANGE_PARAMS:
        p.add_argument(f"--{name}", type=parse_range, default=None, metavar="LO..HI")
    p.add_argument("--parallel", type=int, default=None)
    p.add_argument("--precision-cap", type=int, default=None)
    p.add_argument("--witness-cap", type=int, default=100)
    p.add_argument("--mode", choices=(EXACT, INTERVAL), default=None)
    p.add_argument("--quick", action="store_true", help="with 'all': run the reduced suite")
    p.add_argument("--strict-undecided", action="store_true")
    p.add_argument("--out", default=None)
    fmt(p, ("text", "csv", "structured"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("f", help="print f(n) for n or a range lo..hi")
    p.add_argument("n", type=parse_range)
    p.set_defaults(func=cmd_f)

    p = sub.add_parser("scan", help="list window hits up to --n-max")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--strictness", choices=(search.STRICT, search.NON_STRICT), default=search.STRICT)
    p.add_argument("--block-size", type=int, default=100)
    p.add_argument("--parallel", type=int, default=None)
    p.add_argument("--precision", type=int, default=64)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("stat", help="hit counts and the normalised statistic up to --x")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--precision", type=int, default=64)
    p.add_argument("--parallel", type=int, default=None)
    fmt(p)
    p.set_defaults(func=cmd_stat)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"binombounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"binombounds: domain error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (search.CheckpointError, OSError) as exc:
        print(f"binombounds: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
