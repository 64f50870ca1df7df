"""Acceptance criteria at full scale, one test per criterion.

Each test prints a ``[PASS]``/``[FAIL]`` line; the lines are repeated in the
pytest terminal summary.  Run directly (``python tests/test_acceptance.py``)
for the same lines without pytest.
"""

from __future__ import annotations

import sys

import pytest

from uflpmc.battery import CRITERIA, run_all, run_criterion

RESULTS: list = []


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = run_criterion(number, "full", seed=0)
    RESULTS.append(result)
    print(result.line())
    assert result.passed, result.line() + "".join(f"\n  {f}" for f in result.failures[:10])


if __name__ == "__main__":
    results = run_all(scale="full", seed=0, stream=sys.stdout)
    sys.exit(0 if all(r.passed for r in results) else 1)
