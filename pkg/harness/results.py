"""
Result files: the BER CSV, its plot-data companion and the timing CSV.

Float columns are written with ``repr`` so that reading a file back gives the
same values bit for bit.
"""

from __future__ import annotations

import csv
import json
import logging
from collections.abc import Iterable
from pathlib import Path

from harness.types import BerRecord, TimingRecord

logger = logging.getLogger(__name__)

RESULT_COLUMNS = (
    "detector",
    "modulation",
    "n_symbols",
    "n_dims",
    "snr_db",
    "realizations",
    "bits_total",
    "bit_errors",
    "ber",
    "mean_detect_time_s",
)

TIMING_COLUMNS = (
    "detector",
    "n_symbols",
    "n_dims",
    "trials",
    "mean_seconds",
    "p50_seconds",
    "p95_seconds",
)


class ResultsParseError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def _format_float(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def _record_row(record: BerRecord) -> list[str]:
    return [
        record.detector,
        record.modulation,
        str(record.n_symbols),
        str(record.n_dims),
        _format_float(record.snr_db),
        str(record.realizations_done),
        str(record.bits_total),
        str(record.bit_errors),
        _format_float(record.ber),
        _format_float(record.mean_detect_time),
    ]


def metadata_path(path: Path | str) -> Path:
    """``<results>.meta``: the seed and detector settings behind a results CSV."""
    return Path(f"{path}.meta")


def write_results(
    records: Iterable[BerRecord], path: Path | str, metadata: dict | None = None
) -> None:
    """
    Writes the BER CSV (header always present, LF line endings, UTF-8).

    With ``metadata`` the run description is written next to it as JSON, so a
    later resume can tell whether the rows came from the same experiment.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        writer.writerows(_record_row(record) for record in records)
    if metadata is not None:
        metadata_path(path).write_text(
            json.dumps(metadata, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
            newline="\n",
        )


def read_metadata(path: Path | str) -> dict | None:
    """Run description stored beside the results CSV at ``path``, if any."""
    meta = metadata_path(path)
    if not meta.exists():
        return None
    try:
        metadata = json.loads(meta.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ResultsParseError(exc.lineno, f"{meta}: {exc.msg}.") from exc
    if not isinstance(metadata, dict):
        raise ResultsParseError(1, f"{meta}: expected a JSON object.")
    return metadata


def _parse_row(row: list[str], line: int) -> BerRecord:
    if len(row) != len(RESULT_COLUMNS):
        raise ResultsParseError(
            line, f"expected {len(RESULT_COLUMNS)} columns, found {len(row)}."
        )
    values = dict(zip(RESULT_COLUMNS, row))
    try:
        record = BerRecord(
            detector=values["detector"],
            modulation=values["modulation"],
            n_symbols=int(values["n_symbols"]),
            n_dims=int(values["n_dims"]),
            snr_db=float(values["snr_db"]),
            realizations_done=int(values["realizations"]),
            bits_total=int(values["bits_total"]),
            bit_errors=int(values["bit_errors"]),
            mean_detect_time=(
                float(values["mean_detect_time_s"])
                if values["mean_detect_time_s"]
                else None
            ),
        )
        stored_ber = float(values["ber"])
    except ValueError as exc:
        raise ResultsParseError(line, str(exc)) from exc

    if stored_ber != record.ber:
        raise ResultsParseError(
            line, f"ber {stored_ber!r} does not equal bit_errors/bits_total."
        )
    return record


def read_results(path: Path | str) -> list[BerRecord]:
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))

    if not rows or tuple(rows[0]) != RESULT_COLUMNS:
        raise ResultsParseError(1, "missing or unexpected header row.")
    return [_parse_row(row, index) for index, row in enumerate(rows[1:], start=2)]


def emit_plot_data(records: Iterable[BerRecord], path: Path | str) -> None:
    """
    One block per detector, in the order detectors first appear:

        # soav
        snr_db,ber
        0,0.1234
        ...

    Blocks are separated by a blank line.
    """
    series: dict[str, list[BerRecord]] = {}
    for record in records:
        series.setdefault(record.detector, []).append(record)
    if not series:
        raise ValueError("Plot data needs at least one record.")

    blocks = []
    for detector, points in series.items():
        lines = [f"# {detector}", "snr_db,ber"]
        lines.extend(f"{p.snr_db:.10g},{p.ber:.10g}" for p in points)
        blocks.append("\n".join(lines) + "\n")

    Path(path).write_text("\n".join(blocks), encoding="utf-8", newline="\n")
    logger.debug("Wrote %d plot series to %s.", len(blocks), path)


def write_timing_results(records: Iterable[TimingRecord], path: Path | str) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TIMING_COLUMNS)
        for record in records:
            writer.writerow(
                [
                    record.detector,
                    record.n_symbols,
                    record.n_dims,
                    record.trials,
                    _format_float(record.mean_seconds),
                    _format_float(record.p50_seconds),
                    _format_float(record.p95_seconds),
                ]
            )
