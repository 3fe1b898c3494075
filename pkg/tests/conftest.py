from __future__ import annotations

import os
import random

import pytest
from hypothesis import settings

SEED = int(os.environ.get("BINOMBOUNDS_TEST_SEED", "20261015"))

settings.register_profile("seeded", derandomize=False, deadline=None, print_blob=True)
settings.load_profile("seeded")


def pytest_report_header(config):
    return f"binombounds test seed: {SEED} (override with BINOMBOUNDS_TEST_SEED)"


def pytest_collection_modifyitems(config, items):
    # pin every hypothesis test to the printed seed
    for item in items:
        fn = getattr(item, "obj", None)
        if getattr(fn, "is_hypothesis_test", False):
            fn._hypothesis_internal_use_seed = SEED


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line[1])


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line for an acceptance criterion, then assert it."""
    log = request.config.stash[_ACCEPTANCE]

    def report(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
        print(line)
        log.append((number, line))
        assert ok, line

    return report


@pytest.fixture
def rng(request) -> random.Random:
    print(f"seed={SEED} test={request.node.name}")
    return random.Random(f"{SEED}:{request.node.name}")
