import hypothesis
import pytest

from catsym import samples

hypothesis.settings.register_profile("default", deadline=None, max_examples=60)
hypothesis.settings.load_profile("default")


@pytest.fixture
def terminal():
    return samples.terminal()


@pytest.fixture
def interval():
    return samples.interval()


@pytest.fixture
def group2():
    return samples.group2()


_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one acceptance line; returns ``ok`` so tests can assert on it."""
    lines = request.config.stash.setdefault(_VERDICTS, [])

    def record(n, ok, summary):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {summary}"
        lines.append((n, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
