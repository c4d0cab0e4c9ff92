import pytest

from augopt.model import ModelParams, ObjectiveParams, State


@pytest.fixture
def params():
    return ModelParams()


@pytest.fixture
def obj():
    return ObjectiveParams()


@pytest.fixture
def x0():
    return State(0.2, 0.5, 0.7)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if passed else 'FAIL'}  {detail}")
