"""The ten acceptance criteria, one test each, with a pass/fail line per criterion.

The lines are printed even under output capture; ``metaspec selftest``
prints the same table.
"""

import pytest

from metaspec import acceptance


@pytest.fixture(scope="module")
def results():
    return {r.name: r for r in acceptance.run()}


def test_ten_criteria_registered():
    assert len(acceptance.CRITERIA) == 10
    assert len({c.name for c in acceptance.CRITERIA}) == 10


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: c.name)
def test_criterion(results, criterion, capsys):
    result = results[criterion.name]
    with capsys.disabled():
        print("\n" + result.line())
    assert result.ok, result.detail
    assert result.elapsed <= result.time_limit, f"took {result.elapsed:.1f}s > {result.time_limit:.0f}s"
