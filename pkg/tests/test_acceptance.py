"""Acceptance criteria 1-10; each prints one pass/fail line."""

import pytest

from gardner_hierarchy import acceptance
from gardner_hierarchy.golden import load_golden


@pytest.fixture(scope="module")
def golden():
    return load_golden(acceptance.DEFAULT_GOLDEN)


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, golden, capsys):
    result = acceptance.run_criterion(number, golden)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.details
