import pytest
from hypothesis import settings

settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repro")

_CRITERIA: dict[str, tuple[str, str]] = {}


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion.

    Usage: ``criterion("3", "su(2) determinant identity", ok, detail)``; the
    assertion is made by the test itself after recording.
    """

    def record(key: str, title: str, ok: bool, detail: str = ""):
        line = f"criterion {key:<4} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        _CRITERIA[key] = (line, "PASS" if ok else "FAIL")
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")

    def order(k):
        num = "".join(ch for ch in k if ch.isdigit())
        return (int(num), k)

    for key in sorted(_CRITERIA, key=order):
        terminalreporter.write_line(_CRITERIA[key][0])
