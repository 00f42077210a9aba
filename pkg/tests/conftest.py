import numpy as np
import pytest

CRITERIA_LINES: list[str] = []


def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}"
    if detail:
        line += f" ({detail})"
    CRITERIA_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


def random_complex(rng, size=None, inner=0.5, outer=2.0):
    radius = rng.uniform(inner, outer, size)
    return radius * np.exp(1j * rng.uniform(0, 2 * np.pi, size))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
