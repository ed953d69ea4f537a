"""Robustness sweeps over drive-amplitude and detuning miscalibration.

This module owns the error-model normalization: the dimensionless knobs
(eta, epsilon) are turned into physical offsets against a single derived
amplitude scale omega_sm, the peak of the recast superadiabatic drive over
a loop program. The holonomic family is normalized to the same time budget
by giving its Gaussian the peak omega_sm / 1.134, which makes its window
match the loop duration.

Grids are written as CSV with '#'-prefixed metadata lines followed by
eta,epsilon,fidelity rows in row-major order (eta outer), plus a JSON
sidecar carrying the same metadata and any per-cell failures. Output is
byte-reproducible when SOURCE_DATE_EPOCH is set.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .gates import ErrorModel, realize_single, realize_twoqubit
from .hamiltonians import HyperfineParams, superadiabatic_fields
from .propagator import PropagatorConfig
from .schedules import TwoLevelParams, build_u1_schedule, build_u2_schedule

__all__ = [
    "HOLONOMIC_PEAK_DIVISOR",
    "OmegaSmReport",
    "FidelityGrid",
    "derive_omega_sm",
    "omega_sm_report",
    "sweep2d",
    "compare_families",
    "write_grid_csv",
    "read_grid_csv",
    "artifact_timestamp",
    "COMPARE_PANELS",
]

log = logging.getLogger(__name__)

HOLONOMIC_PEAK_DIVISOR = 1.134

DEFAULT_SCAN_POINTS = 200_001


@dataclass(frozen=True)
class OmegaSmReport:
    """Derived peak drive and how it sits against the hardware bound 2*omega0."""

    omega_sm: float
    bound: float
    satisfied: bool
    t_at_max: float


def derive_omega_sm(p: TwoLevelParams, program: str = "U1",
                    n_points: int = DEFAULT_SCAN_POINTS) -> float:
    """Peak of the recast drive amplitude omega_s over the loop, rad/us.

    Scanned on a dense uniform grid (at least 1e5 points). The stroke
    phases do not enter omega_s, so they are fixed arbitrarily.
    """
    return omega_sm_report(p, program, n_points).omega_sm


def omega_sm_report(p: TwoLevelParams, program: str = "U1",
                    n_points: int = DEFAULT_SCAN_POINTS) -> OmegaSmReport:
    if n_points < 100_000:
        raise ParameterError(f"scan needs at least 1e5 points, got {n_points}")
    if program not in ("U1", "U2"):
        raise ParameterError(f"program must be 'U1' or 'U2', got {program!r}")
    builder = build_u1_schedule if program == "U1" else build_u2_schedule
    schedule = builder(p, 0.0, 0.0)
    ts = np.linspace(0.0, schedule.total_time, n_points)
    fields = superadiabatic_fields(schedule, ts)
    k = int(np.argmax(fields.omega_s))
    omega_sm = float(fields.omega_s[k])
    bound = 2.0 * p.omega0
    satisfied = omega_sm <= bound * (1.0 + 1e-3)
    if not satisfied:
        log.warning(
            "derived peak drive %.6f rad/us exceeds the bound 2*omega0 = %.6f rad/us",
            omega_sm, bound,
        )
    return OmegaSmReport(omega_sm=omega_sm, bound=bound, satisfied=satisfied,
                         t_at_max=float(ts[k]))


@dataclass
class FidelityGrid:
    """Fidelity over an (eta, epsilon) grid for one family and program."""

    eta_axis: np.ndarray
    epsilon_axis: np.ndarray
    fidelities: np.ndarray
    family: str
    program: str
    gamma: float
    params: dict
    omega_sm: float
    failures: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.eta_axis = np.asarray(self.eta_axis, dtype=float)
        self.epsilon_axis = np.asarray(self.epsilon_axis, dtype=float)
        self.fidelities = np.asarray(self.fidelities, dtype=float)
        expected = (self.eta_axis.shape[0], self.epsilon_axis.shape[0])
        if self.fidelities.shape != expected:
            raise ParameterError(
                f"fidelity grid shape {self.fidelities.shape} does not match axes {expected}"
            )


def _check_axis(axis, name: str) -> np.ndarray:
    arr = np.asarray(axis, dtype=float).ravel()
    if arr.size == 0:
        raise ParameterError(f"{name} axis is empty")
    if arr.size > 1 and not np.all(np.diff(arr) > 0.0):
        raise ParameterError(f"{name} axis must be strictly increasing")
    return arr


def _cell_fidelity(task: dict, eta: float, epsilon: float) -> float:
    err = ErrorModel(eta=eta, epsilon=epsilon, omega_ref=task["omega_ref"],
                     eta_mode=task["eta_mode"])
    if task["hf"] is None:
        result = realize_single(
            task["family"], task["program"], task["gamma"], task["p"], err,
            slowdown=task["slowdown"], cfg=task["cfg"],
        )
    else:
        result = realize_twoqubit(
            task["family"], task["program"], task["gamma"], task["p"], task["hf"], err,
            slowdown=task["slowdown"], cfg=task["cfg"],
        )
    return result.fidelity


def _row_task(payload):
    task, i, eta = payload
    fids = np.empty(len(task["epsilon_axis"]))
    failures = {}
    for j, epsilon in enumerate(task["epsilon_axis"]):
        try:
            fids[j] = _cell_fidelity(task, float(eta), float(epsilon))
        except Exception as exc:  # recorded per cell, sweep continues
            fids[j] = np.nan
            failures[j] = f"{type(exc).__name__}: {exc}"
    return i, fids, failures


def sweep2d(
    family: str,
    program: str,
    gamma_target: float,
    p: TwoLevelParams,
    eta_axis,
    epsilon_axis,
    *,
    hf: HyperfineParams | None = None,
    workers: int = 1,
    slowdown: float = 10.0,
    cfg: PropagatorConfig | None = None,
    eta_mode: str = "multiplicative",
    omega_ref: float | None = None,
) -> FidelityGrid:
    """Fidelity of one gate over a grid of (eta, epsilon) miscalibrations.

    Cells that raise are recorded as NaN with the failure reason kept in
    grid.failures[(i, j)]; the sweep itself never aborts. Rows may be
    distributed over worker processes; assembly order is fixed by row
    index, so any worker count gives identical results.
    """
    eta_axis = _check_axis(eta_axis, "eta")
    epsilon_axis = _check_axis(epsilon_axis, "epsilon")
    omega_sm = derive_omega_sm(p, program if program in ("U1", "U2") else "U1")
    if omega_ref is None:
        omega_ref = omega_sm / HOLONOMIC_PEAK_DIVISOR if family == "HOLONOMIC" else omega_sm
    task = {
        "family": family,
        "program": program,
        "gamma": float(gamma_target),
        "p": p,
        "hf": hf,
        "slowdown": float(slowdown),
        "cfg": cfg or PropagatorConfig(),
        "omega_ref": float(omega_ref),
        "eta_mode": eta_mode,
        "epsilon_axis": [float(e) for e in epsilon_axis],
    }
    payloads = [(task, i, float(eta)) for i, eta in enumerate(eta_axis)]
    fidelities = np.empty((eta_axis.shape[0], epsilon_axis.shape[0]))
    failures: dict = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row_task, payloads))
    else:
        rows = [_row_task(pl) for pl in payloads]
    for i, fids, row_failures in rows:
        fidelities[i] = fids
        for j, reason in row_failures.items():
            failures[(i, j)] = reason
    params = {
        "omega0": p.omega0,
        "delta0": p.delta0,
        "tau": p.tau,
        "slowdown": slowdown if family == "ADIABATIC" else None,
        "a_hf": hf.a_hf if hf is not None else None,
        "shift_sign": hf.shift_sign if hf is not None else None,
        "qubits": 1 if hf is None else 2,
        "eta_mode": eta_mode,
        "omega_ref": float(omega_ref),
    }
    return FidelityGrid(
        eta_axis=eta_axis,
        epsilon_axis=epsilon_axis,
        fidelities=fidelities,
        family=family,
        program=program,
        gamma=float(gamma_target),
        params=params,
        omega_sm=omega_sm,
        failures=failures,
        metadata={"omega_ref": float(omega_ref), "eta_mode": eta_mode},
    )


def artifact_timestamp() -> str:
    """UTC timestamp honoring SOURCE_DATE_EPOCH for reproducible output."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        stamp = datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    else:
        stamp = datetime.now(timezone.utc)
    return stamp.isoformat()


def _format_float(x: float) -> str:
    return format(float(x), ".17g")


def write_grid_csv(
    grid: FidelityGrid,
    path,
    *,
    config_hash: str = "",
    tool_version: str = "",
    timestamp: str | None = None,
) -> Path:
    """Write a grid as metadata-headed CSV plus a JSON sidecar.

    The sidecar shares the basename with a .json suffix and additionally
    records per-cell failures.
    """
    path = Path(path)
    stamp = timestamp if timestamp is not None else artifact_timestamp()
    params_json = json.dumps(grid.params, sort_keys=True, separators=(",", ":"))
    lines = [
        f"# family: {grid.family}",
        f"# program: {grid.program}",
        f"# gamma: {_format_float(grid.gamma)}",
        f"# params: {params_json}",
        f"# omega_sm: {_format_float(grid.omega_sm)}",
        f"# timestamp: {stamp}",
        f"# config_hash: {config_hash}",
        f"# tool_version: {tool_version}",
        "eta,epsilon,fidelity",
    ]
    for i, eta in enumerate(grid.eta_axis):
        for j, epsilon in enumerate(grid.epsilon_axis):
            lines.append(
                f"{_format_float(eta)},{_format_float(epsilon)},"
                f"{_format_float(grid.fidelities[i, j])}"
            )
    path.write_text("\n".join(lines) + "\n")
    sidecar = {
        "family": grid.family,
        "program": grid.program,
        "gamma": grid.gamma,
        "params": grid.params,
        "omega_sm": grid.omega_sm,
        "timestamp": stamp,
        "config_hash": config_hash,
        "tool_version": tool_version,
        "eta_axis": [float(x) for x in grid.eta_axis],
        "epsilon_axis": [float(x) for x in grid.epsilon_axis],
        "n_failed": len(grid.failures),
        "failures": [
            {"i": i, "j": j, "eta": float(grid.eta_axis[i]),
             "epsilon": float(grid.epsilon_axis[j]), "reason": reason}
            for (i, j), reason in sorted(grid.failures.items())
        ],
    }
    path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return path


def read_grid_csv(path) -> FidelityGrid:
    """Reconstruct a FidelityGrid from a CSV written by write_grid_csv."""
    path = Path(path)
    meta: dict = {}
    rows = []
    header_seen = False
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif not header_seen:
            header_seen = True
        elif line.strip():
            eta_s, eps_s, fid_s = line.split(",")
            rows.append((float(eta_s), float(eps_s), float(fid_s)))
    eta_axis = list(dict.fromkeys(r[0] for r in rows))
    eps_axis = list(dict.fromkeys(r[1] for r in rows))
    fidelities = np.full((len(eta_axis), len(eps_axis)), np.nan)
    eta_index = {v: i for i, v in enumerate(eta_axis)}
    eps_index = {v: j for j, v in enumerate(eps_axis)}
    for eta, eps, fid in rows:
        fidelities[eta_index[eta], eps_index[eps]] = fid
    return FidelityGrid(
        eta_axis=np.array(eta_axis),
        epsilon_axis=np.array(eps_axis),
        fidelities=fidelities,
        family=meta.get("family", ""),
        program=meta.get("program", ""),
        gamma=float(meta.get("gamma", "nan")),
        params=json.loads(meta["params"]) if "params" in meta else {},
        omega_sm=float(meta.get("omega_sm", "nan")),
        metadata={k: v for k, v in meta.items()
                  if k in ("timestamp", "config_hash", "tool_version")},
    )


COMPARE_PANELS = (
    ("fig2a", "SGQG", 1),
    ("fig2b", "ADIABATIC", 1),
    ("fig2c", "HOLONOMIC", 1),
    ("fig2d", "SGQG", 2),
    ("fig2e", "ADIABATIC", 2),
    ("fig2f", "HOLONOMIC", 2),
)


def compare_families(
    p: TwoLevelParams,
    a_hf: float,
    eta_axis,
    epsilon_axis,
    out_dir,
    *,
    gamma: float = np.pi / 2.0,
    slowdown: float = 10.0,
    shift_sign: int = 1,
    workers: int = 1,
    cfg: PropagatorConfig | None = None,
    eta_mode: str = "multiplicative",
    config_hash: str = "",
    tool_version: str = "",
    timestamp: str | None = None,
) -> dict:
    """Six-panel family comparison written as fig2a..fig2f CSV grids.

    Panels a-c sweep the single-qubit phase gate for the superadiabatic,
    slowed-adiabatic, and holonomic families; panels d-f sweep the
    conditional two-qubit version of each. Returns {name: (grid, path)}.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results: dict = {}
    for name, family, qubits in COMPARE_PANELS:
        hf = None
        if qubits == 2:
            hf = HyperfineParams(
                a_hf=a_hf,
                levels=6 if family == "HOLONOMIC" else 4,
                shift_sign=shift_sign,
            )
        grid = sweep2d(
            family, "U1", gamma, p, eta_axis, epsilon_axis,
            hf=hf, workers=workers, slowdown=slowdown, cfg=cfg, eta_mode=eta_mode,
        )
        path = write_grid_csv(
            grid, out / f"{name}.csv",
            config_hash=config_hash, tool_version=tool_version, timestamp=timestamp,
        )
        results[name] = (grid, path)
    return results
