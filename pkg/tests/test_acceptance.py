"""Every acceptance criterion at its stated tolerance, one PASS/FAIL line each."""

import pytest

from perioda.harness import ACCEPTANCE, run_check


@pytest.mark.parametrize("key", [k for k, _, _ in ACCEPTANCE], ids=lambda k: f"criterion_{k:02d}")
def test_criterion(key, capsys):
    result = run_check(key, seed=42)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
