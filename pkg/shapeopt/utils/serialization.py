"""Artifact serialization: fields, spectra, .dat columns and JSON reports.

Every writer is deterministic: identical inputs give identical bytes.
"""

from collections.abc import Iterable, Mapping, Sequence
import io
import json
import logging
from pathlib import Path
import re

import numpy as np
from pydantic import BaseModel

from shapeopt.core.errors import ConfigError, GridError
from shapeopt.fields.grid import Grid2D, make_grid

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
SPECTRUM_COLUMNS = ("k", "omega_k", "dpsi_R", "dxi_R", "dzeta_R")
_HEADER = re.compile(r"#\s*n=(?P<n>\d+),\s*L=(?P<L>[^,]+),\s*h=(?P<h>\S+)")


def _table(rows: np.ndarray, delimiter: str, header: str | None = None) -> str:
    buffer = io.StringIO()
    if header is not None:
        buffer.write(header + "\n")
    np.savetxt(buffer, np.atleast_2d(rows), fmt=FLOAT_FORMAT, delimiter=delimiter)
    return buffer.getvalue()


def field_to_csv(values: np.ndarray, grid: Grid2D) -> str:
    """Header comment with the grid, then one row per first index."""
    header = f"# n={grid.cells_per_side}, L={grid.half_width!r}, h={grid.h!r}"
    return _table(np.asarray(values, dtype=float), ",", header)


def field_from_csv(text: str) -> tuple[Grid2D, np.ndarray]:
    """Parse a field written by ``field_to_csv``.

    Raises:
        ConfigError: If the header is missing.
        GridError: If the rows do not form a cell or node array of the grid.
    """
    lines = text.splitlines()
    match = _HEADER.match(lines[0]) if lines else None
    if match is None:
        raise ConfigError("field CSV lacks the '# n=.., L=.., h=..' header")
    grid = make_grid(float(match["L"]), int(match["n"]))
    values = np.loadtxt(io.StringIO("\n".join(lines[1:])), delimiter=",", ndmin=2)
    if values.shape not in (grid.cell_shape, grid.node_shape):
        raise GridError("field CSV shape does not match its header", shape=values.shape)
    return grid, values


def field_to_json(values: np.ndarray, grid: Grid2D, name: str) -> str:
    """Grid metadata plus the values as a flat row-major array."""
    values = np.asarray(values, dtype=float)
    payload = {
        "name": name,
        "n": grid.cells_per_side,
        "L": grid.half_width,
        "h": grid.h,
        "shape": list(values.shape),
        "values": values.ravel().tolist(),
    }
    return json.dumps(payload, sort_keys=True) + "\n"


def field_from_json(text: str) -> tuple[Grid2D, np.ndarray]:
    """Parse a field written by ``field_to_json``.

    Raises:
        GridError: If the flat array does not match the stated shape.
    """
    payload = json.loads(text)
    grid = make_grid(float(payload["L"]), int(payload["n"]))
    shape = tuple(payload["shape"])
    values = np.asarray(payload["values"], dtype=float)
    if shape not in (grid.cell_shape, grid.node_shape) or values.size != int(np.prod(shape)):
        raise GridError("field JSON shape does not match its grid", shape=shape)
    return grid, values.reshape(shape)


def spectrum_to_csv(rows: Iterable[Sequence[float]]) -> str:
    """Spectrum rows (k, ω_k, ψ'_k(R), ξ'_k(R), ζ'_k(R))."""
    lines = [",".join(SPECTRUM_COLUMNS)]
    for row in rows:
        k, *rest = row
        lines.append(",".join([str(int(k)), *(FLOAT_FORMAT % value for value in rest)]))
    return "\n".join(lines) + "\n"


def columns_to_dat(columns: Mapping[str, Sequence[float] | np.ndarray]) -> str:
    """Whitespace-separated plot columns with a '#' header naming them."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[name], dtype=float) for name in names])
    return _table(data, " ", "# " + " ".join(names))


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    """Plain CSV table; integers stay integers."""
    lines = [",".join(header)]
    for row in rows:
        cells = [str(v) if isinstance(v, (int, np.integer)) else FLOAT_FORMAT % v for v in row]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def report_to_json(report: BaseModel) -> str:
    """Serialize a report model; field order is fixed by the model."""
    return report.model_dump_json(indent=2) + "\n"


def artifact_name(command: str, config_hash: str, suffix: str) -> str:
    return f"{command}-{config_hash}.{suffix}"


def write_artifacts(
    out_dir: Path, command: str, config_hash: str, artifacts: Mapping[str, str]
) -> list[Path]:
    """Write ``<command>-<hash>.<suffix>`` files and return their paths."""
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for suffix, content in artifacts.items():
        path = out_dir / artifact_name(command, config_hash, suffix)
        path.write_text(content, encoding="utf-8")
        paths.append(path)
    logger.info(
        "Wrote artifacts",
        extra={"command": command, "files": [p.name for p in paths], "out_dir": str(out_dir)},
    )
    return paths


__all__ = [
    "SPECTRUM_COLUMNS",
    "artifact_name",
    "columns_to_dat",
    "field_from_csv",
    "field_from_json",
    "field_to_csv",
    "field_to_json",
    "report_to_json",
    "rows_to_csv",
    "spectrum_to_csv",
    "write_artifacts",
]
