"""Acceptance gate: every verification criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail line
per criterion (or ``unsharp verify --suite all`` for the same suites outside
pytest).  Criteria with stated runtime budgets are timed and fail when over.
"""

import pytest

from unsharp.verify import CRITERIA, RUNTIME_LIMITS

_RESULTS = {}


def _run(key):
    if key not in _RESULTS:
        _RESULTS[key] = dict(CRITERIA)[key]()
    return _RESULTS[key]


@pytest.mark.parametrize("key", [k for k, _ in CRITERIA])
def test_criterion(key):
    result = _run(key)
    print(result.line())
    assert result.ok, f"{key}: {result.detail}"
    limit = RUNTIME_LIMITS.get(key)
    if limit is not None:
        assert result.seconds < limit, f"{key} took {result.seconds:.1f}s (limit {limit:.0f}s)"
