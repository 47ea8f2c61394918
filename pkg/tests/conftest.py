import math

import pytest

from ucamimo import LinkConfig, tilted_link

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record():
    """Collects one summary line per acceptance criterion; ``passed=None`` marks a note."""

    def _record(label, passed, detail):
        tag = "INFO" if passed is None else "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{tag}] {label}: {detail}")

    return _record


@pytest.fixture
def tilted4():
    return tilted_link(4)


@pytest.fixture
def tilted6():
    return tilted_link(6)


@pytest.fixture
def skewed5():
    """Tilted link with unequal first-antenna phases and a nonzero azimuth."""
    return LinkConfig(
        n_tx=5, n_rx=5, r_tx=0.08, r_rx=0.12, d_centers=3.0, wavelength=0.01,
        theta=2.0, phi=0.4, alpha_tx=0.3, alpha_rx=1.1,
    )


@pytest.fixture
def coaxial():
    def make(n, radius=0.1, d=4.0, alpha=0.0):
        return LinkConfig(
            n_tx=n, n_rx=n, r_tx=radius, r_rx=radius, d_centers=d, wavelength=0.01,
            beta=4 * math.pi, alpha_tx=alpha, alpha_rx=alpha,
        )

    return make
