import pytest

from paritymodes.cli_io.generators import example_signal


@pytest.fixture(scope="session")
def examples():
    """All reference signals, generated once."""
    return {ex: example_signal(ex) for ex in range(11)}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, summary_lines
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in summary_lines(RESULTS):
        terminalreporter.write_line(line)
