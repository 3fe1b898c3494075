from __future__ import annotations

import io
import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from binombounds.cli import EVALUATORS, main, parse_range
from binombounds.verify import reports_from_json, sweep

LISTED = [(2, 1), (4, 1), (19, 6), (61, 23), (89, 35), (130, 53), (139, 57), (291, 126), (343, 150),
          (521, 233), (712, 323), (788, 359), (929, 426), (950, 436), (971, 446), (1080, 498),
          (1289, 598), (1387, 645)]


def run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def fields(text: str) -> dict[str, str]:
    return dict(line.split(" = ", 1) for line in text.splitlines() if " = " in line)


def endpoints(text: str) -> tuple[Fraction, Fraction]:
    lo, hi = text.strip("[]").split(", ")
    return Fraction(lo), Fraction(hi)


def test_parse_range():
    assert parse_range("3..7") == (3, 7)
    assert parse_range("5") == (5, 5)
    for bad in ("7..3", "a..b", "1..", "1-4"):
        with pytest.raises(Exception):
            parse_range(bad)


def test_eval_robbins_brackets_factorial():
    code, out = run("eval", "robbins", "10")
    f = fields(out)
    assert code == 0 and f["factorial"] == "3628800"
    assert endpoints(f["lower"])[1] < 3628800 < endpoints(f["upper"])[0]


def test_eval_thm22_and_hirschhorn():
    f = fields(run("eval", "thm22", "2", "1")[1])
    assert f["binomial"] == "2"
    lo, hi = endpoints(f["bound"])
    assert Fraction("2.25675") < lo < hi < Fraction("2.25676")
    lo, hi = endpoints(fields(run("eval", "hirschhorn", "2")[1])["remainder_r"])
    assert 5 < lo < hi < 11


def test_eval_prints_exact_values_in_full():
    f = fields(run("eval", "eq12", "5", "80")[1])
    from math import comb

    assert f["binomial"] == str(comb(400, 80))


@pytest.mark.parametrize(
    "bound,params",
    [("robbins", "1"), ("eq12", "2 5"), ("hirschhorn", "100"), ("stanica", "3 2 1"), ("thm21", "10 5"),
     ("thm22", "64 32"), ("thm23", "4 12"), ("thm24", "400 200"), ("corollary21", "400 320"),
     ("lemma21", "3 0"), ("lemma22", "80 0"), ("lemma23", "4 2")],
)
def test_eval_every_bound(bound, params):
    code, out = run("eval", bound, *params.split(), "--format", "structured")
    doc = json.loads(out)
    assert code == 0 and doc["command"][:2] == ["eval", bound]
    assert set(doc) == {"command", "parameters", "payload", "precision_used", "wall_time", "version"}
    assert bound in EVALUATORS


def test_eval_usage_errors():
    assert run("eval", "nope", "1")[0] == 2
    assert run("eval", "robbins", "1", "2")[0] == 2
    assert run("eval", "thm21", "4", "3")[0] == 2


def test_check_exit_codes():
    code, out = run("check", "thm21", "4", "2")
    assert code == 0 and fields(out)["margin"] == "612"
    assert run("check", "stanica_lower_printed", "3", "2", "1")[0] == 1
    assert run("check", "thm21", "4", "3")[0] == 2
    assert run("check", "thm22", "3", "1", "--mode", "exact")[0] == 2
    assert run("check", "hirschhorn_remainder", "1000", "--precision-cap", "64")[0] == 0
    assert run("check", "hirschhorn_remainder", "1000", "--precision-cap", "64", "--strict-undecided")[0] == 3


def test_precision_cap_flag_beats_environment(monkeypatch):
    monkeypatch.setenv("BINOMBOUNDS_PRECISION_CAP", "64")
    code, out = run("check", "hirschhorn_remainder", "1000", "--strict-undecided")
    assert code == 3 and fields(out)["verdict"] == "undecided"
    code, out = run("check", "hirschhorn_remainder", "1000", "--strict-undecided", "--precision-cap", "256")
    assert code == 0 and fields(out)["verdict"] == "holds"
    monkeypatch.setenv("BINOMBOUNDS_PRECISION_CAP", "lots")
    assert run("check", "thm21", "4", "2")[0] == 2


def test_verify_lemma22():
    code, out = run("verify", "lemma22", "--k", "80..200", "--r", "0..4")
    assert code == 0
    assert "total=605 holds=605 fails=0 undecided=0" in out


def test_verify_failures_and_malformed_ranges(capsys):
    assert run("verify", "stanica_lower_printed", "--m", "3..4", "--p", "1..3", "--n", "1..3")[0] == 1
    with pytest.raises(SystemExit) as exc:
        run("verify", "thm21", "--n", "4..x")
    assert exc.value.code == 2
    assert run("verify", "thm21", "--n", "1..3", "--k", "2..2")[0] == 2
    assert run("verify", "all", "--n", "1..3")[0] == 2


def test_verify_csv_is_deterministic(monkeypatch):
    args = ("verify", "thm21", "--n", "4..50", "--k", "2..25", "--format", "csv")
    first = run(*args)[1]
    assert first == run(*args)[1]
    monkeypatch.setenv("BINOMBOUNDS_PARALLEL", "2")
    assert first == run(*args)[1]
    lines = first.splitlines()
    assert lines[0] == "bound,n,k,verdict,margin_lo,margin_hi,precision_bits"
    assert lines[1] == "thm21_rational,4,2,holds,612,612,0"
    assert len(lines) == 1 + sum(n // 2 - 1 for n in range(4, 51))


def test_verify_csv_interval_rows():
    _, out = run("verify", "thm22", "--n", "1..3", "--format", "csv")
    rows = out.splitlines()[1:]
    assert len(rows) == 9
    _, n, k, verdict, lo, hi, bits = rows[0].split(",")
    assert verdict == "holds" and 0 < Fraction(lo) < Fraction(hi) and bits == "64"


def test_verify_structured_round_trip():
    code, out = run("verify", "thm23", "--m", "3..5", "--n", "3..40", "--format", "structured")
    again = reports_from_json(out)
    direct = sweep("thm23", {"m": (3, 5), "n": (3, 40)})
    assert code == 0 and len(again) == 1
    assert again[0].to_text(with_time=False) == direct.to_text(with_time=False)


def test_verify_all_quick(tmp_path):
    path = tmp_path / "suite.csv"
    assert run("verify", "all", "--quick", "--format", "csv", "--out", str(path))[0] == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "bound,params,verdict,margin_lo,margin_hi,precision_bits"
    assert lines[1].startswith('robbins_lower,n=1,holds,')


def test_f_command():
    code, out = run("f", "19")
    assert code == 0 and out.strip() == "f(19) = 6 window_hit=true"
    assert run("f", "3..5")[1].splitlines() == ["f(3) = 1", "f(4) = 1", "f(5) = 2"]


def data_lines(text: str) -> list[str]:
    return [l for l in text.splitlines() if l and not l.startswith("#")]


def test_scan_small_and_listed():
    _, out = run("scan", "--n-max", "10")
    assert data_lines(out) == ["2,1,2,false,false", "4,1,4,false,false"]
    _, out = run("scan", "--n-max", "1500")
    assert [tuple(map(int, l.split(",")[:2])) for l in data_lines(out)] == LISTED
    assert "# count=16" in out
    assert run("scan", "--n-max", "1")[0] == 2


def test_scan_resumes_to_identical_file(tmp_path):
    full = tmp_path / "full.txt"
    run("scan", "--n-max", "600", "--out", str(full), "--strictness", "non_strict")
    ckpt = tmp_path / "ck.json"
    part = tmp_path / "part.txt"
    run("scan", "--n-max", "300", "--checkpoint", str(ckpt), "--out", str(part))
    assert json.loads(ckpt.read_text())["last_completed_n"] == 300
    resumed = tmp_path / "resumed.txt"
    run("scan", "--n-max", "600", "--checkpoint", str(ckpt), "--out", str(resumed), "--strictness", "non_strict")
    assert resumed.read_text() == full.read_text()
    assert "# count=9" in full.read_text()


def test_scan_bad_paths(tmp_path):
    assert run("scan", "--n-max", "20", "--out", str(tmp_path / "missing" / "x.txt"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"format_version": 7}')
    assert run("scan", "--n-max", "20", "--checkpoint", str(bad))[0] == 2


def test_stat_reports_both_counts():
    code, out = run("stat", "--x", "1500")
    f = fields(out)
    assert code == 0 and f["count_strict"] == "16" and f["count_non_strict"] == "17"
    lo, hi = endpoints(f["target_cuberoot_pi_over_2"])
    assert lo < Fraction("1.1624473515096264756") < hi
    doc = json.loads(run("stat", "--x", "1500", "--format", "structured")[1])
    assert doc["payload"]["count_strict"] == "16"
    assert run("stat", "--x", "2")[0] == 2


def test_console_entry_point():
    env = dict(os.environ, BINOMBOUNDS_PRECISION_CAP="64")
    proc = subprocess.run(
        [sys.executable, "-m", "binombounds", "check", "hirschhorn_remainder", "1000", "--strict-undecided"],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 3
    proc = subprocess.run([sys.executable, "-m", "binombounds", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout
