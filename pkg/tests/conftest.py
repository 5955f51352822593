import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

CTX = [("A", 1, 1), ("A", 2, 1), ("A", 2, 2), ("A", 3, 2), ("B", 2, 1)]
CTX_IDS = [f"{k}{r}s{s}" for k, r, s in CTX]

ACCEPTANCE_LINES = {}


@pytest.fixture(params=CTX, ids=CTX_IDS)
def ctx(request):
    from qflag.flagcalc import build_context

    return build_context(*request.param)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
