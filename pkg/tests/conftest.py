import pytest

from support import ACCEPTANCE_RESULTS, fig5_model


@pytest.fixture(scope="session")
def fig5():
    return fig5_model()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid, status, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{status}  {cid}  {detail}")
