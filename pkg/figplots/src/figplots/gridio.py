"""Read the metadata-headed fidelity-grid CSVs written by the sweep tool.

The expected layout is a block of ``# key: value`` lines, the column
header ``eta,epsilon,fidelity``, and one row per cell in row-major order
with eta varying slowest. Everything here is a pure reader: values are
taken from the file and never recomputed, and the original field strings
are kept alongside the parsed floats so annotations can echo them
verbatim.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DATA_HEADER = "eta,epsilon,fidelity"
REQUIRED_META = ("family", "program", "gamma", "params", "omega_sm")


class GridFormatError(ValueError):
    """The file does not follow the grid CSV layout."""


@dataclass(frozen=True)
class GridData:
    """One fidelity grid plus its verbatim metadata strings."""

    path: Path
    meta: dict[str, str]
    eta: np.ndarray
    epsilon: np.ndarray
    fidelity: np.ndarray
    eta_strings: tuple[str, ...]
    epsilon_strings: tuple[str, ...]

    @property
    def family(self) -> str:
        return self.meta["family"]

    @property
    def program(self) -> str:
        return self.meta["program"]

    @property
    def params(self) -> dict:
        return json.loads(self.meta["params"])

    @property
    def qubits(self) -> int:
        return int(self.params.get("qubits", 1))

    @property
    def label(self) -> str:
        return f"{self.family} {self.program}"


def _fail(path: Path, why: str) -> GridFormatError:
    return GridFormatError(f"{path}: {why}")


def read_grid(path) -> GridData:
    """Parse one grid CSV, validating metadata and row-major structure."""
    path = Path(path)
    meta: dict[str, str] = {}
    rows: list[tuple[str, str, str]] = []
    header_seen = False
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            if header_seen:
                raise _fail(path, f"line {lineno}: metadata after the data header")
            key, sep, value = line[1:].partition(":")
            if not sep:
                raise _fail(path, f"line {lineno}: metadata line without a colon")
            meta[key.strip()] = value.strip()
        elif not header_seen:
            if line.strip() != DATA_HEADER:
                raise _fail(path, f"line {lineno}: expected column header "
                                  f"{DATA_HEADER!r}, got {line.strip()!r}")
            header_seen = True
        else:
            fields = line.split(",")
            if len(fields) != 3:
                raise _fail(path, f"line {lineno}: expected 3 fields, got {len(fields)}")
            rows.append((fields[0], fields[1], fields[2]))

    if not header_seen:
        raise _fail(path, f"missing the {DATA_HEADER!r} column header")
    missing = [k for k in REQUIRED_META if k not in meta]
    if missing:
        raise _fail(path, f"missing metadata keys: {', '.join(missing)}")
    try:
        params = json.loads(meta["params"])
    except json.JSONDecodeError as exc:
        raise _fail(path, f"params metadata is not valid JSON: {exc}") from None
    if not isinstance(params, dict):
        raise _fail(path, "params metadata must be a JSON object")
    for key in ("gamma", "omega_sm"):
        try:
            float(meta[key])
        except ValueError:
            raise _fail(path, f"{key} metadata is not numeric: {meta[key]!r}") from None
    if not rows:
        raise _fail(path, "no data rows")

    try:
        values = np.array([[float(f) for f in row] for row in rows])
    except ValueError as exc:
        raise _fail(path, f"non-numeric data field: {exc}") from None

    # eta varies slowest, so the first block of rows fixes the epsilon axis
    eps_strings: list[str] = []
    for eta_s, eps_s, _ in rows:
        if eta_s != rows[0][0]:
            break
        eps_strings.append(eps_s)
    n_eps = len(eps_strings)
    n_eta, rem = divmod(len(rows), n_eps)
    if rem:
        raise _fail(path, f"{len(rows)} rows do not tile {n_eps} epsilon values")
    eta_strings = [rows[i * n_eps][0] for i in range(n_eta)]
    for i in range(n_eta):
        block = rows[i * n_eps:(i + 1) * n_eps]
        if any(r[0] != eta_strings[i] for r in block):
            raise _fail(path, f"eta block {i} is not constant; rows are not row-major")
        if [r[1] for r in block] != eps_strings:
            raise _fail(path, f"eta block {i} repeats a different epsilon axis")
    if len(set(eta_strings)) != n_eta or len(set(eps_strings)) != n_eps:
        raise _fail(path, "axis values repeat; rows are not a grid")

    return GridData(
        path=path,
        meta=meta,
        eta=values[::n_eps, 0].copy(),
        epsilon=values[:n_eps, 1].copy(),
        fidelity=values[:, 2].reshape(n_eta, n_eps),
        eta_strings=tuple(eta_strings),
        epsilon_strings=tuple(eps_strings),
    )
