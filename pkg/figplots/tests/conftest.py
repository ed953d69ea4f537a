"""Shared CSV fixtures and the figplots acceptance summary."""

from __future__ import annotations

import pytest

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
    terminalreporter.section("acceptance criteria (figplots)")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


def grid_csv_text(
    *,
    family: str = "SGQG",
    program: str = "U1",
    qubits: int = 1,
    eta=(-0.1, 0.0, 0.1),
    epsilon=(-0.1, 0.0, 0.1),
    values=None,
    gamma: str = "1.5707963267948966",
    omega_sm: str = "25.132741228718345",
    timestamp: str = "2026-08-16T00:00:00Z",
    config_hash: str = "deadbeef",
) -> str:
    """Build a well-formed grid CSV in the producer's exact layout."""
    lines = [
        f"# family: {family}",
        f"# program: {program}",
        f"# gamma: {gamma}",
        f'# params: {{"qubits":{qubits},"tau":0.16}}',
        f"# omega_sm: {omega_sm}",
        f"# timestamp: {timestamp}",
        f"# config_hash: {config_hash}",
        "# tool_version: 0.1.0",
        "eta,epsilon,fidelity",
    ]
    for i, e in enumerate(eta):
        for j, p in enumerate(epsilon):
            v = values[i][j] if values is not None else 0.9 - 0.01 * (i + 2 * j)
            lines.append(f"{format(e, '.17g')},{format(p, '.17g')},{format(v, '.17g')}")
    return "\n".join(lines) + "\n"


@pytest.fixture
def grid_writer(tmp_path):
    """Write a synthetic grid CSV into tmp_path and return its path."""

    def _write(name: str = "grid.csv", **kwargs):
        path = tmp_path / name
        path.write_text(grid_csv_text(**kwargs))
        return path

    return _write


@pytest.fixture
def six_panel_dir(tmp_path, grid_writer):
    """A directory shaped like the comparison output: fig2a..fig2f."""
    combos = [("SGQG", 1), ("ADIABATIC", 1), ("HOLONOMIC", 1),
              ("SGQG", 2), ("ADIABATIC", 2), ("HOLONOMIC", 2)]
    for letter, (family, qubits) in zip("abcdef", combos):
        grid_writer(f"fig2{letter}.csv", family=family, qubits=qubits)
    return tmp_path
