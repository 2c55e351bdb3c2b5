"""Acceptance criteria, one PASS/FAIL line each.

    pytest tests/test_acceptance.py -v     (lines are repeated in the summary)
    python tests/test_acceptance.py        (plain report)
"""
import subprocess
import sys
import time

import pytest

from nstqft.checks import CRITERIA

TITLE_11 = "determinism: two fresh verify runs are byte-identical"
LINES: dict = {}


def _line(number, title, ok, detail):
    return f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title}  ({detail})"


def run_criterion(number, title, fn):
    t = time.perf_counter()
    checks = fn()
    dt = time.perf_counter() - t
    bad = [c for c in checks if not c.ok]
    ok = bool(checks) and not bad
    detail = f"{len(checks) - len(bad)}/{len(checks)} checks, {dt:.0f}s"
    if bad:
        detail += "; failed: " + "; ".join(c.name for c in bad)
    return ok, _line(number, title, ok, detail), checks


def verify_bytes() -> tuple:
    cmd = [sys.executable, "-m", "nstqft", "verify", "--r", "3"]
    p = subprocess.run(cmd, capture_output=True, check=False)
    return p.returncode, p.stdout


def run_determinism():
    t = time.perf_counter()
    (c1, a), (c2, b) = verify_bytes(), verify_bytes()
    ok = a == b and c1 == 0 and c2 == 0 and bool(a)
    detail = f"{len(a)} bytes each, exit {c1}/{c2}, {time.perf_counter() - t:.0f}s"
    return ok, _line(11, TITLE_11, ok, detail)


@pytest.mark.slow
@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"criterion{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn):
    ok, line, checks = run_criterion(number, title, fn)
    LINES[number] = line
    print(line)
    for c in checks:
        print("    " + c.line())
    assert ok, line


@pytest.mark.slow
def test_criterion11_determinism():
    ok, line = run_determinism()
    LINES[11] = line
    print(line)
    assert ok, line


if __name__ == "__main__":
    status = 0
    for number, title, fn in CRITERIA:
        ok, line, _ = run_criterion(number, title, fn)
        print(line, flush=True)
        status |= not ok
    ok, line = run_determinism()
    print(line)
    sys.exit(status | (not ok))
