# -*- coding: utf-8 -*-
# ------------------------------------------------------------------------------
#
#   Copyright 2026 Valory AG
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.
#
# ------------------------------------------------------------------------------
"""Various utils."""
import csv
import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from vibent import __version__
from vibent.errors import EmptyTrajectoryError
from vibent.gaussian import CovarianceTrajectory


FLOAT_FORMAT = "{:.12g}"


def _json_default(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serialisable")


def to_json(data: Any) -> str:
    """Compact, key-sorted JSON."""
    return json.dumps(data, sort_keys=True, default=_json_default, separators=(",", ":"))


def format_value(value: Any) -> str:
    """Render a CSV cell; floats get a fixed significant-digit format."""
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        if np.isnan(value):
            return ""
        return FLOAT_FORMAT.format(float(value))
    return str(value)


def header_lines(**sections: Any) -> List[str]:
    """
    Header block for an output file.

    :param sections: named JSON sections such as ``params`` or ``run``

    :return: ``#``-prefixed lines, the code version first
    """
    lines = [f"# vibent {__version__}"]
    for name in sorted(sections):
        lines.append(f"# {name} {to_json(sections[name])}")
    return lines


def write_csv(
    path: Path,
    header: Sequence[str],
    fieldnames: Sequence[str],
    rows: Iterable[Sequence[Any]],
) -> Path:
    """
    Write a CSV file preceded by the header block.

    :param path: output file
    :param header: header lines from :func:`header_lines`
    :param fieldnames: column names
    :param rows: row values in column order

    :return: path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        for line in header:
            f.write(line + "\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def write_matrix_csv(
    path: Path, header: Sequence[str], matrix: np.ndarray, labels: Optional[Sequence[str]] = None
) -> Path:
    """Write a square matrix with row labels in the first column."""
    matrix = np.asarray(matrix)
    labels = list(labels) if labels is not None else [str(k + 1) for k in range(matrix.shape[0])]
    return write_csv(
        path,
        header,
        ["mode"] + labels,
        ([label] + list(row) for label, row in zip(labels, matrix)),
    )


def read_csv(path: Path) -> Dict[str, Any]:
    """
    Read a CSV written by :func:`write_csv`.

    :param path: file to read

    :return: dict with ``header`` (parsed JSON sections), ``fields`` and ``rows``
    """
    header: Dict[str, Any] = {}
    body = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("# "):
            name, _, payload = line[2:].partition(" ")
            header[name] = json.loads(payload) if payload.startswith(("{", "[")) else payload
        else:
            body.append(line)
    reader = csv.reader(body)
    fields = next(reader)
    return {"header": header, "fields": fields, "rows": [list(r) for r in reader]}


def upper_triangle_names(size: int) -> List[str]:
    """Column names of the row-major upper triangle of a size×size matrix."""
    rows, cols = np.triu_indices(size)
    return [f"v_{i + 1}_{j + 1}" for i, j in zip(rows, cols)]


def write_trajectory_csv(path: Path, header: Sequence[str], trajectory: CovarianceTrajectory) -> Path:
    """
    Flat CSV of a covariance trajectory: time and the upper triangle of V.

    :param path: output file
    :param header: header lines
    :param trajectory: CovarianceTrajectory

    :return: path written
    """
    size = trajectory.covariances.shape[1]
    rows, cols = np.triu_indices(size)
    return write_csv(
        path,
        header,
        ["time"] + upper_triangle_names(size),
        ([t] + list(v[rows, cols]) for t, v in zip(trajectory.times, trajectory.covariances)),
    )


def write_trajectory_npz(path: Path, trajectory: CovarianceTrajectory) -> Path:
    """Compressed binary covariance trajectory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as f:
        np.savez_compressed(f, times=trajectory.times, covariances=trajectory.covariances)
    return path


def load_trajectory_npz(path: Path) -> CovarianceTrajectory:
    """Load a trajectory written by :func:`write_trajectory_npz`."""
    with np.load(Path(path)) as data:
        times = data["times"]
        if times.size == 0:
            raise EmptyTrajectoryError(f"{path} holds no snapshots")
        return CovarianceTrajectory(times, data["covariances"])
