import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from rainbow_bases import BaseSequence, BinaryMatroid

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture
def running_example():
    """n=2, k=1: columns 10, 01, 11; B_1 = {e1,e2}, B_2 = {e1,e3}."""
    M = BinaryMatroid.from_strings(["101", "011"])
    B = BaseSequence.validated(M, [[0, 1], [0, 2]])
    return M, B


def brute_rank(vectors) -> int:
    """Rank as log2 of the size of the span, by listing every combination."""
    span = {0}
    for v in vectors:
        span |= {s ^ v for s in span}
    return len(span).bit_length() - 1


def column_vectors(A: np.ndarray) -> list[int]:
    return [sum(int(A[i, j]) << i for i in range(A.shape[0])) for j in range(A.shape[1])]


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record a one-line verdict for an acceptance criterion."""

    def add(name: str, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        print(ACCEPTANCE_LINES[-1])

    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
