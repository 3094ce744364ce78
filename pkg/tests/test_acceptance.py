"""Acceptance battery: one test (and one printed pass/fail line) per criterion."""

import pytest

from fglcheck.acceptance import CRITERIA


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[n for n, _ in CRITERIA])
def test_criterion(name, fn):
    rep = fn()
    print(f"[{'PASS' if rep.verdict else 'FAIL'}] criterion {name}")
    if not rep.verdict:
        for wname, w in rep.witnesses[:5]:
            print(f"    witness {wname}: {w}")
    assert rep.verdict, f"criterion {name}: {rep.witnesses[:3]}"
