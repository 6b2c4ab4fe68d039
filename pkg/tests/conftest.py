import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def criterion(request):
    """Record one acceptance line; printed in the terminal summary and on stdout."""
    lines = request.config.stash.setdefault(_CRITERIA, [])

    def record(number: int, title: str, ok: bool, detail: str, elapsed: float, limit: float):
        status = "PASS" if ok and elapsed < limit else "FAIL"
        line = f"[{status}] criterion {number:2d}: {title} ({detail}; {elapsed:.1f}s of {limit:.0f}s)"
        lines.append((number, line))
        print(line)
        return line

    return record


_CRITERIA = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
