"""Artifact IO: matrix CSV files, PGM dumps and experiment reports."""

from __future__ import annotations

import csv
from dataclasses import dataclass
import logging
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt

from .const import (
    ATTR_BINS_RETAINED,
    ATTR_DEPTH,
    ATTR_GATE_COUNT,
    ATTR_MASK_SHAPE,
    ATTR_MAX_ERROR,
    ATTR_ORACLE_ERROR,
    ATTR_SNR_IMPROVEMENT,
    ATTR_SNR_IN,
    ATTR_SNR_OUT,
    ATTR_TIME,
    ATTR_TOTAL_HEAT,
    FIELD_FILE,
    FIELD_IMAGE,
    REPORT_FILE,
)
from .exceptions import InvalidParameter, InvalidSize
from .spectral import ExperimentReport

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetricDescription:
    """How one metric appears in report.csv."""

    key: str
    name: str


FILTER_METRICS: tuple[MetricDescription, ...] = (
    MetricDescription(key=ATTR_MASK_SHAPE, name="Mask shape"),
    MetricDescription(key=ATTR_BINS_RETAINED, name="Bins retained"),
    MetricDescription(key=ATTR_SNR_IN, name="SNR in (dB)"),
    MetricDescription(key=ATTR_SNR_OUT, name="SNR out (dB)"),
    MetricDescription(key=ATTR_SNR_IMPROVEMENT, name="SNR improvement (dB)"),
    MetricDescription(key=ATTR_ORACLE_ERROR, name="Error vs same-mask ref."),
    MetricDescription(key=ATTR_GATE_COUNT, name="Gate count"),
    MetricDescription(key=ATTR_DEPTH, name="Depth"),
)
"""One row per metric, one column per pipeline."""

HEAT_METRICS: tuple[MetricDescription, ...] = (
    MetricDescription(key=ATTR_TIME, name="Time t"),
    MetricDescription(key=ATTR_MAX_ERROR, name="Max error"),
    MetricDescription(key=ATTR_TOTAL_HEAT, name="Total heat"),
)
"""One column per metric, one row per time step."""


def format_value(value: Any) -> str:
    """Shortest round-trip text of a number; empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (complex, np.complexfloating)):
        return repr(complex(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def read_matrix_csv(path: str | Path, dtype: type = float) -> npt.NDArray:
    """Read one matrix row per line, comma separated.

    :param path: CSV file
    :param dtype: float or complex; complex entries use Python literal form
    :raises InvalidParameter: on unparsable entries
    :raises InvalidSize: on ragged or empty input
    """
    parse = complex if dtype is complex else float
    rows = []
    with open(path, newline="") as f:
        for number, line in enumerate(csv.reader(f), start=1):
            if not line:
                continue
            try:
                rows.append([parse(cell.strip()) for cell in line])
            except ValueError as e:
                _LOGGER.error(f"Bad entry in {path} line {number}: {e}")
                raise InvalidParameter(f"{path}:{number}: {e}") from e
    if not rows or len({len(row) for row in rows}) != 1:
        _LOGGER.error(f"{path} is empty or has rows of different lengths")
        raise InvalidSize(f"{path} does not hold a rectangular matrix")
    return np.array(rows, dtype=dtype)


def write_matrix_csv(path: str | Path, matrix: npt.ArrayLike) -> Path:
    """Write a matrix with repr-formatted entries."""
    path = Path(path)
    rows = np.atleast_2d(np.asarray(matrix))
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerows([format_value(value) for value in row] for row in rows)
    return path


def write_pgm(path: str | Path, field: npt.ArrayLike) -> Path:
    """Binary P5 grayscale dump, min–max normalised to 8 bits."""
    path = Path(path)
    values = np.real(np.asarray(field)).astype(float)
    low, high = float(values.min()), float(values.max())
    if high > low:
        pixels = np.round(255 * (values - low) / (high - low)).astype(np.uint8)
    else:
        pixels = np.zeros(values.shape, dtype=np.uint8)
    height, width = pixels.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        f.write(pixels.tobytes())
    return path


def report_table(report: ExperimentReport) -> list[list[str]]:
    """report.csv rows, header first."""
    if report.name == "heat":
        header = [description.name for description in HEAT_METRICS]
        body = [
            [format_value(row.get(description.key)) for description in HEAT_METRICS]
            for row in report.metrics.values()
        ]
        return [header, *body]

    columns = list(report.metrics)
    table = [["Metric", *columns]]
    for description in FILTER_METRICS:
        table.append(
            [
                description.name,
                *(format_value(report.metrics[c].get(description.key)) for c in columns),
            ]
        )
    return table


def write_report(
    report: ExperimentReport, out_dir: str | Path, pgm: bool = False
) -> list[Path]:
    """Write report.csv, one field_<stage>.csv per snapshot and optional PGM dumps.

    :returns: written paths
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    report_path = out_dir / REPORT_FILE
    with open(report_path, "w", newline="") as f:
        csv.writer(f, lineterminator="\n").writerows(report_table(report))
    written = [report_path]

    for stage, field in report.fields.items():
        written.append(write_matrix_csv(out_dir / FIELD_FILE.format(stage), field))
        if pgm:
            written.append(write_pgm(out_dir / FIELD_IMAGE.format(stage), field))
    _LOGGER.info(f"Wrote {len(written)} files to {out_dir}")
    return written
