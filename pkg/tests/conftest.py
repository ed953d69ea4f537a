"""Shared fixtures and the acceptance-criteria terminal summary."""

from __future__ import annotations

import math

import pytest

from geomgate import PropagatorConfig, TwoLevelParams, derive_omega_sm

ACCEPTANCE_LINES: list[str] = []


def _record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"{criterion} {'PASS' if ok else 'FAIL'}: {detail}")


@pytest.fixture(scope="session")
def record_acceptance():
    """Collector for the one-line-per-criterion terminal summary."""
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def paper_params() -> TwoLevelParams:
    return TwoLevelParams(omega0=4.0 * math.pi, delta0=6.0, tau=0.16)


@pytest.fixture(scope="session")
def omega_sm(paper_params) -> float:
    return derive_omega_sm(paper_params, "U1")


@pytest.fixture(scope="session")
def fast_cfg() -> PropagatorConfig:
    return PropagatorConfig(steps_per_segment=4000)
