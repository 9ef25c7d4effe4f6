import pytest

from artifact.doublealg import AlgebraContext


@pytest.fixture(scope="session")
def ctx0():
    return AlgebraContext(0)


@pytest.fixture(scope="session")
def ctx1():
    return AlgebraContext(1)


@pytest.fixture(scope="session")
def ctx2():
    return AlgebraContext(2)


@pytest.fixture(scope="session")
def verdicts(request):
    """Collects one PASS/FAIL line per acceptance criterion."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def record(number: int, ok: bool, text: str, seconds: float, limit: float | None = None):
        timing = f"{seconds:.1f}s" + (f" (limit {limit:g}s)" if limit is not None else "")
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {text} [{timing}]"
        lines.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
