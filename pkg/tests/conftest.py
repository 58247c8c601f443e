from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from cmnorm.arith import Factorization

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

_verdicts: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        ok = rep.passed and _verdicts.get(n, ("PASS",))[0] == "PASS"
        _verdicts[n] = ("PASS" if ok else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_verdicts):
        verdict, title = _verdicts[n]
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {title}")


@pytest.fixture(scope="session")
def norm_table() -> dict[int, Factorization]:
    rows = {}
    for line in (DATA / "eisenstein_norms.txt").read_text().splitlines():
        if line.strip():
            f, fac = line.split(":", 1)
            rows[int(f)] = Factorization.parse(fac.strip())
    return rows
