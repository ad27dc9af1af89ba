import pytest
from hypothesis import HealthCheck, settings

from zetabounds.numerics import PrecisionContext

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(60)


@pytest.fixture(scope="session")
def vctx():
    return PrecisionContext(60, "outward")


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """record(n, ok, text): one PASS/FAIL line per criterion, shown in the terminal summary."""

    def record(n: int, ok: bool, text: str) -> bool:
        _ACCEPTANCE[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}"
        print(_ACCEPTANCE[n])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
