from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


@pytest.fixture
def acceptance_record():
    """Call ``record(n, title, passed, seconds)`` once per acceptance criterion."""

    def record(n: int, title: str, passed: bool, seconds: float) -> None:
        _ACCEPTANCE[n] = ("PASS" if passed else "FAIL", title, seconds)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        status, title, seconds = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}  ({seconds:.2f} s)")
