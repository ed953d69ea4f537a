"""Command-line interface: waveform, evolve, gate, sweep, compare.

Configuration is a JSON document deep-merged over built-in defaults, with
dotted-path overrides from the command line. Frequency-like quantities are
given as {"value": v, "units": "angular" | "cycles"}; cycles are MHz and
converted by 2*pi, angular values are rad/us as-is. There is no implicit
unit conversion anywhere else.

Every artifact embeds the configuration hash, the tool version, and the
resolved peak drive omega_sm. Exit codes: 0 success, 2 configuration
error, 3 computation failure, 4 IO failure.
"""

from __future__ import annotations

import argparse
import copy
import hashlib
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, GeomgateError
from .gates import (
    ErrorModel,
    realize_single,
    realize_twoqubit,
    two_level_drive,
)
from .hamiltonians import HyperfineParams, eigenframe, superadiabatic_fields
from .phases import phase_report
from .propagator import PropagatorConfig, evolve_state
from .schedules import (
    HolonomicParams,
    TwoLevelParams,
    build_adiabatic_schedule,
    build_holonomic_schedule,
    build_u1_schedule,
    build_u2_schedule,
    sample,
)
from .sweeps import (
    HOLONOMIC_PEAK_DIVISOR,
    artifact_timestamp,
    compare_families,
    derive_omega_sm,
    sweep2d,
    write_grid_csv,
)

__all__ = ["main", "default_config", "load_config", "apply_overrides", "resolve_config",
           "config_hash", "RunConfig"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3
EXIT_IO = 4


def default_config() -> dict:
    return {
        "physical": {
            "omega0": {"value": 2.0, "units": "cycles"},
            "delta0": {"value": 6.0, "units": "angular"},
            "tau": 0.16,
            "a_hf": {"value": 127.0, "units": "cycles"},
            "hyperfine_sign": 1,
        },
        "gate": {
            "family": "SGQG",
            "program": "U1",
            "gamma": math.pi / 2.0,
            "qubits": 1,
            "slowdown": 10.0,
            "phi1": 0.0,
            "branch": "+",
        },
        "errors": {
            "eta": 0.0,
            "epsilon": 0.0,
            "eta_mode": "multiplicative",
        },
        "sweep": {
            "eta_start": -0.2,
            "eta_stop": 0.2,
            "eta_points": 41,
            "epsilon_start": -0.2,
            "epsilon_stop": 0.2,
            "epsilon_points": 41,
        },
        "propagator": {
            "steps_per_segment": 4000,
            "tolerance": 1e-9,
        },
        "output": {
            "waveform_points": 2001,
            "trajectory_stride": 1,
        },
    }


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        here = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown configuration field {here!r}")
        if isinstance(base[key], dict) and not _is_quantity(base[key]):
            if not isinstance(value, dict):
                raise ConfigError(f"{here!r} must be a table, got {value!r}")
            out[key] = _merge(base[key], value, here)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _is_quantity(node) -> bool:
    return isinstance(node, dict) and set(node) == {"value", "units"}


def load_config(path=None) -> dict:
    """Defaults deep-merged with an optional JSON file; unknown keys fail."""
    cfg = default_config()
    if path is None:
        return cfg
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        user = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(user, dict):
        raise ConfigError("config root must be a JSON object")
    return _merge(cfg, user)


def apply_overrides(cfg: dict, overrides) -> dict:
    """Apply repeated --override key=value pairs with dotted paths."""
    out = copy.deepcopy(cfg)
    for item in overrides or []:
        key, sep, raw = item.partition("=")
        if not sep:
            raise ConfigError(f"override {item!r} must look like section.key=value")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            if not isinstance(node, dict) or part not in node:
                raise ConfigError(f"unknown configuration field {key!r}")
            node = node[part]
        leaf = parts[-1]
        if not isinstance(node, dict) or leaf not in node:
            raise ConfigError(f"unknown configuration field {key!r}")
        node[leaf] = value
    return out


def config_hash(cfg: dict) -> str:
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _angular(node, name: str) -> float:
    """Resolve a frequency quantity to rad/us with explicit units."""
    if not _is_quantity(node):
        raise ConfigError(f"{name} must be {{'value': v, 'units': 'angular'|'cycles'}}")
    value, units = node["value"], node["units"]
    if not isinstance(value, (int, float)):
        raise ConfigError(f"{name}.value must be a number, got {value!r}")
    if units == "angular":
        return float(value)
    if units == "cycles":
        return 2.0 * math.pi * float(value)
    raise ConfigError(f"{name}.units must be 'angular' or 'cycles', got {units!r}")


@dataclass
class RunConfig:
    """Fully resolved run parameters plus the hash of the raw document."""

    p: TwoLevelParams
    a_hf: float
    shift_sign: int
    family: str
    program: str
    gamma: float
    qubits: int
    slowdown: float
    phi1: float
    branch: str
    eta: float
    epsilon: float
    eta_mode: str
    eta_axis: np.ndarray
    epsilon_axis: np.ndarray
    propagator: PropagatorConfig
    waveform_points: int
    trajectory_stride: int
    raw: dict
    hash: str


def resolve_config(cfg: dict) -> RunConfig:
    phys = cfg["physical"]
    gate = cfg["gate"]
    errors = cfg["errors"]
    sweep = cfg["sweep"]
    prop = cfg["propagator"]
    output = cfg["output"]
    try:
        p = TwoLevelParams(
            omega0=_angular(phys["omega0"], "physical.omega0"),
            delta0=_angular(phys["delta0"], "physical.delta0"),
            tau=float(phys["tau"]),
        )
        a_hf = _angular(phys["a_hf"], "physical.a_hf")
        shift_sign = int(phys["hyperfine_sign"])
        if shift_sign not in (1, -1):
            raise ConfigError("physical.hyperfine_sign must be 1 or -1")
        if gate["family"] not in ("SGQG", "ADIABATIC", "HOLONOMIC"):
            raise ConfigError(f"gate.family {gate['family']!r} unknown")
        if gate["program"] not in ("U1", "U2"):
            raise ConfigError(f"gate.program {gate['program']!r} unknown")
        if gate["qubits"] not in (1, 2):
            raise ConfigError("gate.qubits must be 1 or 2")
        if gate["branch"] not in ("+", "-"):
            raise ConfigError("gate.branch must be '+' or '-'")
        for axis in ("eta", "epsilon"):
            if int(sweep[f"{axis}_points"]) < 1:
                raise ConfigError(f"sweep.{axis}_points must be >= 1")
        eta_axis = np.linspace(float(sweep["eta_start"]), float(sweep["eta_stop"]),
                               int(sweep["eta_points"]))
        epsilon_axis = np.linspace(float(sweep["epsilon_start"]), float(sweep["epsilon_stop"]),
                                   int(sweep["epsilon_points"]))
        propagator = PropagatorConfig(
            steps_per_segment=int(prop["steps_per_segment"]),
            tolerance=float(prop["tolerance"]),
        )
        run = RunConfig(
            p=p,
            a_hf=a_hf,
            shift_sign=shift_sign,
            family=str(gate["family"]),
            program=str(gate["program"]),
            gamma=float(gate["gamma"]),
            qubits=int(gate["qubits"]),
            slowdown=float(gate["slowdown"]),
            phi1=float(gate["phi1"]),
            branch=str(gate["branch"]),
            eta=float(errors["eta"]),
            epsilon=float(errors["epsilon"]),
            eta_mode=str(errors["eta_mode"]),
            eta_axis=eta_axis,
            epsilon_axis=epsilon_axis,
            propagator=propagator,
            waveform_points=int(output["waveform_points"]),
            trajectory_stride=max(1, int(output["trajectory_stride"])),
            raw=cfg,
            hash=config_hash(cfg),
        )
    except ConfigError:
        raise
    except (GeomgateError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc
    if run.eta_mode not in ("multiplicative", "additive"):
        raise ConfigError(f"errors.eta_mode {run.eta_mode!r} unknown")
    return run


def _gate_schedule(rc: RunConfig, omega_sm: float):
    """Schedule and error model for the configured gate."""
    if rc.family == "HOLONOMIC":
        omega_nh = omega_sm / HOLONOMIC_PEAK_DIVISOR
        err = ErrorModel(rc.eta, rc.epsilon, omega_ref=omega_nh, eta_mode=rc.eta_mode)
        return build_holonomic_schedule(HolonomicParams.from_peak(omega_nh)), err
    err = ErrorModel(rc.eta, rc.epsilon, omega_ref=omega_sm, eta_mode=rc.eta_mode)
    phi2 = rc.phi1 + math.pi - rc.gamma
    if rc.family == "ADIABATIC":
        return build_adiabatic_schedule(rc.p, rc.program, rc.slowdown, rc.phi1, phi2), err
    builder = build_u1_schedule if rc.program == "U1" else build_u2_schedule
    return builder(rc.p, rc.phi1, phi2), err


def _artifact_meta(rc: RunConfig, omega_sm: float) -> dict:
    return {
        "config_hash": rc.hash,
        "tool_version": __version__,
        "omega_sm": omega_sm,
        "timestamp": artifact_timestamp(),
    }


def _meta_lines(rc: RunConfig, omega_sm: float, extra: dict | None = None) -> list[str]:
    meta = {
        "family": rc.family,
        "program": rc.program,
        "gamma": format(rc.gamma, ".17g"),
        "omega_sm": format(omega_sm, ".17g"),
        "timestamp": artifact_timestamp(),
        "config_hash": rc.hash,
        "tool_version": __version__,
    }
    if extra:
        meta.update(extra)
    return [f"# {key}: {value}" for key, value in meta.items()]


def _f(x: float) -> str:
    return format(float(x), ".17g")


def cmd_waveform(rc: RunConfig, out_dir: Path, workers: int) -> int:
    omega_sm = derive_omega_sm(rc.p)
    schedule, _ = _gate_schedule(rc, omega_sm)
    ts = np.linspace(0.0, schedule.total_time, rc.waveform_points)
    fields = superadiabatic_fields(schedule, ts)
    lines = _meta_lines(rc, omega_sm, {"schedule_tag": schedule.program_tag})
    lines.append("t_us,omega_r,delta,phi,omega_c,omega_s,phi_s")
    for k in range(ts.shape[0]):
        lines.append(",".join(_f(v) for v in (
            fields.t[k], fields.omega_r[k], fields.delta[k], fields.phi[k],
            fields.omega_c[k], fields.omega_s[k], fields.phi_s[k],
        )))
    path = out_dir / "waveform.csv"
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_evolve(rc: RunConfig, out_dir: Path, workers: int) -> int:
    if rc.family == "HOLONOMIC":
        raise ConfigError("evolve is defined for the two-level loop programs")
    omega_sm = derive_omega_sm(rc.p)
    schedule, err = _gate_schedule(rc, omega_sm)
    frame = eigenframe(sample(schedule, 0.0))
    psi0 = frame.lambda_plus if rc.branch == "+" else frame.lambda_minus
    hbuilder = two_level_drive(schedule, err)
    traj = evolve_state(hbuilder, psi0, schedule.total_time, rc.propagator,
                        schedule.boundaries)
    report = phase_report(traj)

    stride = rc.trajectory_stride
    keep = np.arange(0, traj.times.shape[0], stride)
    if keep[-1] != traj.times.shape[0] - 1:
        keep = np.append(keep, traj.times.shape[0] - 1)
    lines = _meta_lines(rc, omega_sm, {"branch": rc.branch})
    lines.append("t_us,re0,im0,re1,im1,bloch_x,bloch_y,bloch_z,dyn_phase")
    for k in keep:
        state = traj.states[k]
        bloch = traj.bloch[k]
        lines.append(",".join(_f(v) for v in (
            traj.times[k], state[0].real, state[0].imag, state[1].real, state[1].imag,
            bloch[0], bloch[1], bloch[2], -traj.dyn_phase_integral[k],
        )))
    csv_path = out_dir / "trajectory.csv"
    csv_path.write_text("\n".join(lines) + "\n")

    payload = {
        "total_phase": report.total_phase,
        "dynamical_phase": report.dynamical_phase,
        "geometric_phase": report.geometric_phase,
        "cyclicity_defect": report.cyclicity_defect,
        "solid_angle": report.solid_angle,
        "branch": rc.branch,
        "family": rc.family,
        "program": rc.program,
        "gamma": rc.gamma,
        **_artifact_meta(rc, omega_sm),
    }
    json_path = out_dir / "phase_report.json"
    json_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


def _matrix_payload(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def cmd_gate(rc: RunConfig, out_dir: Path, workers: int) -> int:
    omega_sm = derive_omega_sm(rc.p)
    omega_ref = omega_sm / HOLONOMIC_PEAK_DIVISOR if rc.family == "HOLONOMIC" else omega_sm
    err = ErrorModel(rc.eta, rc.epsilon, omega_ref=omega_ref, eta_mode=rc.eta_mode)
    if rc.qubits == 1:
        result = realize_single(
            rc.family, rc.program, rc.gamma, rc.p, err,
            slowdown=rc.slowdown, cfg=rc.propagator,
            with_phases=rc.family != "HOLONOMIC", phi_base=rc.phi1,
        )
    else:
        hf = HyperfineParams(a_hf=rc.a_hf, levels=6 if rc.family == "HOLONOMIC" else 4,
                             shift_sign=rc.shift_sign)
        result = realize_twoqubit(
            rc.family, rc.program, rc.gamma, rc.p, hf, err,
            slowdown=rc.slowdown, cfg=rc.propagator, phi_base=rc.phi1,
        )
    payload = {
        "family": result.family,
        "program": result.program,
        "gamma": result.gamma_target,
        "qubits": rc.qubits,
        "fidelity": result.fidelity,
        "timing_us": result.timing,
        "unitarity_defect": result.unitarity_defect,
        "realized": _matrix_payload(result.realized),
        "ideal": _matrix_payload(result.ideal),
        "phase_report": None,
        "gate_metadata": result.metadata,
        **_artifact_meta(rc, omega_sm),
    }
    if result.phase_report is not None:
        payload["phase_report"] = {
            "total_phase": result.phase_report.total_phase,
            "dynamical_phase": result.phase_report.dynamical_phase,
            "geometric_phase": result.phase_report.geometric_phase,
            "cyclicity_defect": result.phase_report.cyclicity_defect,
            "solid_angle": result.phase_report.solid_angle,
        }
    path = out_dir / "gate.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path} (fidelity {result.fidelity:.8f})")
    return EXIT_OK


def cmd_sweep(rc: RunConfig, out_dir: Path, workers: int) -> int:
    hf = None
    if rc.qubits == 2:
        hf = HyperfineParams(a_hf=rc.a_hf, levels=6 if rc.family == "HOLONOMIC" else 4,
                             shift_sign=rc.shift_sign)
    grid = sweep2d(
        rc.family, rc.program, rc.gamma, rc.p, rc.eta_axis, rc.epsilon_axis,
        hf=hf, workers=workers, slowdown=rc.slowdown, cfg=rc.propagator,
        eta_mode=rc.eta_mode,
    )
    path = write_grid_csv(grid, out_dir / "sweep.csv", config_hash=rc.hash,
                          tool_version=__version__)
    total = grid.fidelities.size
    failed = len(grid.failures)
    print(f"wrote {path} ({total - failed}/{total} cells ok)")
    return EXIT_COMPUTE if failed == total else EXIT_OK


def cmd_compare(rc: RunConfig, out_dir: Path, workers: int) -> int:
    results = compare_families(
        rc.p, rc.a_hf, rc.eta_axis, rc.epsilon_axis, out_dir,
        gamma=rc.gamma, slowdown=rc.slowdown, shift_sign=rc.shift_sign,
        workers=workers, cfg=rc.propagator, eta_mode=rc.eta_mode,
        config_hash=rc.hash, tool_version=__version__,
    )
    total = 0
    failed = 0
    for name, (grid, path) in results.items():
        total += grid.fidelities.size
        failed += len(grid.failures)
        print(f"wrote {path}")
    return EXIT_COMPUTE if total > 0 and failed == total else EXIT_OK


COMMANDS = {
    "waveform": cmd_waveform,
    "evolve": cmd_evolve,
    "gate": cmd_gate,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geomgate",
        description="Pulse-level synthesis and robustness analysis of geometric gates.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "waveform": "sample the configured drive onto a CSV table",
        "evolve": "propagate an eigenbranch through one loop and report its phases",
        "gate": "realize the configured gate and score it against the ideal",
        "sweep": "map gate fidelity over an (eta, epsilon) error grid",
        "compare": "run the six-panel family comparison (fig2a..fig2f)",
    }
    for name, desc in descriptions.items():
        cmd = sub.add_parser(name, help=desc)
        cmd.add_argument("--config", type=Path, default=None, help="JSON config file")
        cmd.add_argument("--out", type=Path, default=Path("."), help="output directory")
        cmd.add_argument("--workers", type=int, default=1, help="worker processes for sweeps")
        cmd.add_argument(
            "--override", action="append", default=[], metavar="KEY=VALUE",
            help="dotted-path config override, repeatable",
        )
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = apply_overrides(load_config(args.config), args.override)
        rc = resolve_config(cfg)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](rc, out_dir, max(1, args.workers))
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GeomgateError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
