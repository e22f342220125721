import os

import pytest


@pytest.fixture(scope="session")
def solution():
    from airy2cov.painleve2 import solve_hastings_mcleod

    return solve_hastings_mcleod()


@pytest.fixture(scope="session")
def profile(solution):
    from airy2cov.tw_core import build_profile

    return build_profile(solution)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    monkeypatch.setenv("AIRY2COV_CACHE_DIR", str(tmp_path_factory.getbasetemp() / "cache"))
    yield
    os.environ.pop("AIRY2COV_PURE_PYTHON", None)


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one summary line per acceptance criterion."""
    store = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(number: int, checks: list[tuple[str, bool, str]]):
        entry = store.setdefault(number, [])
        entry.extend(checks)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_ACCEPTANCE, None)
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(store):
        checks = store[number]
        failed = [c for c in checks if not c[1]]
        status = "PASS" if not failed else "FAIL"
        shown = failed if failed else checks
        detail = "; ".join(f"{label}: {info}" for label, _, info in shown[:6])
        if len(shown) > 6:
            detail += f"; and {len(shown) - 6} more"
        terminalreporter.write_line(f"criterion {number}: {status} ({len(checks) - len(failed)}/{len(checks)} checks) {detail}")
