"""CSV writers for the engine's output files, plus the row-level comparison
used by verification. Files are UTF-8 with a mandatory header row and "\n"
line endings."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Mapping

from .metrics import CategoryStanding, MetricsRow
from .records import SourceRecord
from .tracker import TrackerRow

METRICS_HEADER = ["source_id", "title", "year", "citescore", "citations", "documents", "percent_cited"]
STANDINGS_HEADER = ["source_id", "asjc_code", "rank", "n_in_category", "percentile", "quartile"]
TRACKER_HEADER = ["source_id", "tracker_year", "as_of_date", "citations", "documents", "tracker_value"]


def write_metrics_csv(
    path: str | Path, rows: list[MetricsRow], sources: Mapping[int, SourceRecord]
) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(METRICS_HEADER)
        for row in sorted(rows, key=lambda r: r.source_id):
            writer.writerow(
                [
                    row.source_id,
                    sources[row.source_id].title,
                    row.year,
                    str(row.citescore),
                    row.citations,
                    row.documents,
                    row.percent_cited,
                ]
            )
    return path


def write_standings_csv(path: str | Path, standings: list[CategoryStanding]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(STANDINGS_HEADER)
        for row in sorted(standings, key=lambda s: (s.source_id, s.asjc_code)):
            writer.writerow(
                [row.source_id, row.asjc_code, row.rank, row.n_in_category, row.percentile, row.quartile]
            )
    return path


def write_tracker_csv(path: str | Path, rows: list[TrackerRow]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TRACKER_HEADER)
        for row in sorted(rows, key=lambda r: (r.source_id, r.as_of)):
            writer.writerow(
                [
                    row.source_id,
                    row.tracker_year,
                    row.as_of.isoformat(),
                    row.citations,
                    row.documents,
                    str(row.value),
                ]
            )
    return path


def compare_output_files(
    left_path: str | Path, right_path: str | Path, key_width: int, limit: int = 50
) -> list[str]:
    """Row-level differences between two output files of the same format.

    Rows are matched on their first key_width columns after sorting; the
    returned descriptions are capped at `limit`. Empty means identical
    content (headers included).
    """
    left_header, left_rows = _read_rows(left_path, key_width)
    right_header, right_rows = _read_rows(right_path, key_width)
    differences: list[str] = []
    if left_header != right_header:
        differences.append(f"header mismatch: {left_header!r} != {right_header!r}")
    for key in sorted(set(left_rows) | set(right_rows)):
        if len(differences) >= limit:
            break
        left_row = left_rows.get(key)
        right_row = right_rows.get(key)
        if left_row == right_row:
            continue
        label = ",".join(key)
        if left_row is None:
            differences.append(f"row [{label}] only in {Path(right_path).name}: {right_row}")
        elif right_row is None:
            differences.append(f"row [{label}] only in {Path(left_path).name}: {left_row}")
        else:
            differences.append(f"row [{label}]: {left_row} != {right_row}")
    return differences


def _read_rows(path: str | Path, key_width: int) -> tuple[list[str], dict[tuple[str, ...], list[str]]]:
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            return [], {}
        rows = {}
        for row in reader:
            rows[tuple(row[:key_width])] = row
    return header, rows
