"""One test per acceptance criterion.

Each criterion prints its own pass/fail line (run pytest with -s or
check the captured output on failure) and the test asserts the
criterion's verdict, so a red test here pinpoints the broken contract.
"""
import pytest

from precycles import acceptance


@pytest.mark.parametrize("index", [1, 2, 3, 4, 5, 6, 7, 8])
def test_criterion(index):
    result = acceptance.run_criterion(index)
    print(result.line())
    assert result.passed, result.detail


def test_run_all_filter():
    results = acceptance.run_all(only=[2], echo=None)
    assert len(results) == 1
    assert results[0].index == 2 and results[0].passed
