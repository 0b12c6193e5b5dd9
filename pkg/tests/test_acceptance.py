"""One test per exit criterion; each prints a PASS/FAIL line."""

import pytest

from gaborlab import acceptance

RESULTS = []


@pytest.mark.parametrize(
    "number,name,fn",
    [(n, name, fn) for n, name, _, fn in sorted(acceptance.CRITERIA, key=lambda c: c[0])],
    ids=[f"{n:02d}-{name.split()[0]}" for n, name, _, _ in sorted(acceptance.CRITERIA, key=lambda c: c[0])],
)
def test_criterion(number, name, fn):
    (result,) = acceptance.run(numbers=[number])
    RESULTS.append(result)
    print(result.line())
    assert result.passed, result.detail
