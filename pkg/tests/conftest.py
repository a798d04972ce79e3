import contextlib
import time

import pytest

from depgen.model import train_model
from depgen.toy import heldout_corpus, training_corpus

_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Context manager that records one PASS/FAIL line for an acceptance criterion."""

    @contextlib.contextmanager
    def run(name: str):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            line = f"FAIL  {name}  ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
            _CRITERIA.append(line)
            print(line)
            raise
        line = f"PASS  {name}  ({time.perf_counter() - start:.2f}s)"
        _CRITERIA.append(line)
        print(line)

    return run


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def toy_train():
    return training_corpus()


@pytest.fixture(scope="session")
def toy_heldout():
    return heldout_corpus()


@pytest.fixture(scope="session")
def toy_model(toy_train):
    model, _ = train_model(toy_train)
    return model
