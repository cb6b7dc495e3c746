import numpy as np
import pytest

from ranksign.params import PRESETS

VERDICTS: list[str] = []


def record(number: int, ok: bool, detail: str):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    VERDICTS.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS):
            terminalreporter.write_line(line)


@pytest.fixture
def rng(request):
    # deterministic per test, different across tests
    seed = sum(request.node.nodeid.encode()) * 7919
    return np.random.default_rng(seed)


@pytest.fixture(params=["toy-q2", "toy-q3", "toy-q16"])
def toy(request):
    return PRESETS[request.param]
