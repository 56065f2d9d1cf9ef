import pytest

ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """Record one acceptance verdict; the line is printed in the terminal summary."""
    lines = request.config.stash[ACCEPTANCE]

    def record(criterion: int, title: str, passed: bool, detail: str = ""):
        verdict = "PASS" if passed else "FAIL"
        lines.append((criterion, f"[{verdict}] criterion {criterion:2d}: {title}. {detail}".rstrip()))
        assert passed, detail

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[ACCEPTANCE]
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
