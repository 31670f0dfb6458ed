import pytest
from hypothesis import HealthCheck, settings

from eqorbit.group_core import builtin_group
from eqorbit.linalg import Field

settings.register_profile("exact", deadline=None, derandomize=True, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exact")

Q = Field(0)
F2 = Field(2)
F5 = Field(5)
FIELDS = [Q, F2, F5]


@pytest.fixture(params=["c2", "c3", "c4", "s3"])
def group(request):
    return builtin_group(request.param)


@pytest.fixture(params=FIELDS, ids=lambda F: F.name)
def field(request):
    return request.param


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one pass/fail line per acceptance criterion."""
    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
