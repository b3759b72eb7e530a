"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one pass/fail line; criterion 9 drives the installed
CLI end to end.
"""

import subprocess
import sys
import time

import pytest

from qheun import acceptance


def _run(index: int) -> acceptance.CriterionResult:
    name, fn, budget = acceptance.CRITERIA[index - 1]
    t0 = time.perf_counter()
    passed, detail = fn()
    dt = time.perf_counter() - t0
    if budget is not None and dt > budget:
        passed = False
        detail += f" [exceeded {budget:.0f}s budget]"
    return acceptance.CriterionResult(index, name, passed, detail, dt)


@pytest.mark.parametrize("index", range(1, 9))
def test_criterion(index):
    result = _run(index)
    print(result.line())
    assert result.passed, result.detail


def test_criterion_9_cli_selftest():
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "qheun.cli", "selftest"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    dt = time.perf_counter() - t0
    status = "PASS" if proc.returncode == 0 and dt < 120 else "FAIL"
    print(f"[{status}] criterion 9: CLI selftest end-to-end ({dt:.2f}s)")
    sys.stdout.write(proc.stdout)
    assert proc.returncode == 0
    assert dt < 120
    assert "8/8 criteria passed" in proc.stdout
