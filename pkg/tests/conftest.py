import numpy as np
import pytest
from hypothesis import settings

from socialgen.graph import DirectedGraph

settings.register_profile("ci", max_examples=200, deadline=None)
settings.register_profile("fast", max_examples=20, deadline=None)
settings.load_profile("ci")

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(number, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


def random_digraph(rng: np.random.Generator, n: int, p_recip: float, p_dir: float) -> DirectedGraph:
    """Small random simple digraph built through the public add operations."""
    g = DirectedGraph(n)
    for i in range(n):
        for j in range(i + 1, n):
            u = rng.random()
            if u < p_recip:
                g.add_reciprocal_edge(i, j)
            elif u < p_recip + p_dir:
                if rng.random() < 0.5:
                    g.add_directed_edge(i, j)
                else:
                    g.add_directed_edge(j, i)
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
