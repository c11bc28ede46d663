import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=30,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, checks)``; prints one verdict line per criterion."""
    results = request.config.stash.setdefault(_ACCEPTANCE_KEY, {})

    def record(n: int, checks: list[tuple[str, bool, str]]) -> bool:
        ok = all(c[1] for c in checks)
        results[n] = (ok, [c for c in checks if not c[1]])
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, failed = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}")
        for name, _, detail in failed:
            terminalreporter.write_line(f"    failed check {name}: {detail}")
