"""Acceptance gate: one test and one printed PASS/FAIL line per criterion.

Each criterion runs the matching reproduction check at full scale and also
holds it to its stated wall-clock budget.  The lines are collected in
``RESULTS`` and echoed in the terminal summary by ``conftest.py``.
"""

from __future__ import annotations

import json

import pytest

from latingame.cli import main
from latingame.verify import CHECKS, run_check

BY_KEY = {c.key: c for c in CHECKS}

# (criterion number, check key, seconds allowed; None when no limit is stated)
CRITERIA = [
    (1, "h33-bob-first", 60),
    (2, "h33-alice-first", 10),
    (3, "thin-hamming", 300),
    (4, "bounds-tight-2x2", 1),
    (5, "cyclic-diagonal", 60),
    (6, "hypercube", 300),
    (7, "contraction", 600),
    (8, "first-try", 60),
    (9, "pairing", 300),
    (10, "simulation", 600),
    (11, "structure", 10),
    (12, "census", 300),
    (13, "open-orbit", None),
]

RESULTS: list[str] = []


@pytest.mark.parametrize("number,key,limit", CRITERIA, ids=[f"criterion-{n:02d}-{k}" for n, k, _ in CRITERIA])
def test_criterion(number, key, limit):
    res = run_check(BY_KEY[key], "full")
    in_time = limit is None or res.seconds <= limit
    verdict = "PASS" if res.passed and not res.skipped and in_time else "FAIL"
    budget = "" if limit is None else f", limit {limit} s"
    detail = res.line().split("] ", 1)[1]
    RESULTS.append(f"[{verdict}] criterion {number:2d}: {detail}{budget}")
    assert not res.skipped, res.line()
    assert res.passed, res.line()
    assert in_time, f"{key} took {res.seconds:.1f} s, over the {limit} s limit"


@pytest.mark.parametrize("first,expected", [("B", 4), ("A", 3)])
def test_chromatic_command_on_h33(first, expected, capsys):
    code = main(["chromatic", "--iso", "3,3;3;Id;Id;Id", "--a", "1", "--b", "1", "--first", first, "--json"])
    data = json.loads(capsys.readouterr().out)
    ok = code == 0 and data["least_winning"] == expected
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] chromatic command, H(3,3), {first} first: "
                   f"expected {expected}, computed {data['least_winning']}")
    assert ok
