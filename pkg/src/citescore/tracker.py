"""The in-progress current-year score, rebuilt on a monthly schedule.

A tracker point is a full recomputation of the annual formula over a
snapshot at an earlier cutoff; there is exactly one scoring implementation,
so the final tracker point and the annual value coincide by construction
once everything has loaded.
"""

from __future__ import annotations

import calendar
import math
from dataclasses import dataclass
from datetime import date
from decimal import Decimal
from fractions import Fraction

from .index import CitationIndex, snapshot
from .metrics import (
    aggregate_counts,
    citescore,
    count_citations,
    count_documents,
    is_eligible,
    score_from_counts,
)
from .records import ELIGIBLE_SOURCE_TYPES


@dataclass(frozen=True)
class TrackerPoint:
    as_of: date
    citations: int
    documents: int
    value: Decimal


@dataclass(frozen=True)
class TrackerSeries:
    """Monthly tracker points for one source; months where the source is not
    yet scoreable (no documents in the cited window) are simply absent."""

    source_id: int
    tracker_year: int
    points: tuple[TrackerPoint, ...]


def month_end(year: int, month: int) -> date:
    return date(year, month, calendar.monthrange(year, month)[1])


def month_end_schedule(start: str, end: str) -> list[date]:
    """Last-day-of-month dates from start to end, both "YYYY-MM", inclusive."""
    start_year, start_month = _parse_month(start)
    end_year, end_month = _parse_month(end)
    if (start_year, start_month) > (end_year, end_month):
        raise ValueError(f"schedule start {start} is after end {end}")
    dates = []
    year, month = start_year, start_month
    while (year, month) <= (end_year, end_month):
        dates.append(month_end(year, month))
        month += 1
        if month == 13:
            year, month = year + 1, 1
    return dates


def _parse_month(text: str) -> tuple[int, int]:
    try:
        year_part, month_part = text.split("-")
        year, month = int(year_part), int(month_part)
    except ValueError as exc:
        raise ValueError(f"expected YYYY-MM, got {text!r}") from exc
    if not 1 <= month <= 12:
        raise ValueError(f"month out of range in {text!r}")
    return year, month


def tracker_value(
    index: CitationIndex, source_id: int, tracker_year: int, as_of: date
) -> Decimal | None:
    """The annual formula applied at an earlier cutoff; None while the source
    is not yet scoreable."""
    view = snapshot(index, as_of)
    if not is_eligible(view, source_id, tracker_year):
        return None
    return citescore(view, source_id, tracker_year)


def tracker_series(
    index: CitationIndex,
    source_id: int,
    tracker_year: int,
    schedule: list[date],
) -> TrackerSeries:
    """Evaluate one source over an ascending schedule of as-of dates."""
    if any(later <= earlier for earlier, later in zip(schedule, schedule[1:])):
        raise ValueError("schedule dates must be strictly ascending")
    points: list[TrackerPoint] = []
    for as_of in schedule:
        view = snapshot(index, as_of)
        if not is_eligible(view, source_id, tracker_year):
            continue
        citations = count_citations(view, source_id, tracker_year)
        documents = count_documents(view, source_id, tracker_year)
        points.append(
            TrackerPoint(
                as_of=as_of,
                citations=citations,
                documents=documents,
                value=score_from_counts(citations, documents),
            )
        )
    # The index is append-only, so both counts are non-decreasing over time.
    for earlier, later in zip(points, points[1:]):
        assert earlier.citations <= later.citations
        assert earlier.documents <= later.documents
    return TrackerSeries(source_id=source_id, tracker_year=tracker_year, points=tuple(points))


@dataclass(frozen=True)
class TrackerRow:
    source_id: int
    tracker_year: int
    as_of: date
    citations: int
    documents: int
    value: Decimal


def tracker_table(
    index: CitationIndex, tracker_year: int, schedule: list[date]
) -> list[TrackerRow]:
    """Tracker points for every scoreable source, for the batch output file.

    Rows are sorted by (source_id, as_of). Uses the same single-pass
    aggregation as the annual batch, one snapshot per schedule date.
    """
    if any(later <= earlier for earlier, later in zip(schedule, schedule[1:])):
        raise ValueError("schedule dates must be strictly ascending")
    rows: list[TrackerRow] = []
    for as_of in schedule:
        view = snapshot(index, as_of)
        counts = aggregate_counts(view, tracker_year)
        for source_id in sorted(counts):
            source = view.sources[source_id]
            tally = counts[source_id]
            if (
                not source.is_actively_indexed
                or source.source_type not in ELIGIBLE_SOURCE_TYPES
                or tally.documents < 1
            ):
                continue
            rows.append(
                TrackerRow(
                    source_id=source_id,
                    tracker_year=tracker_year,
                    as_of=as_of,
                    citations=tally.citations,
                    documents=tally.documents,
                    value=score_from_counts(tally.citations, tally.documents),
                )
            )
    rows.sort(key=lambda r: (r.source_id, r.as_of))
    return rows


@dataclass(frozen=True)
class StabilityPoint:
    as_of: date
    n_sources: int
    rank_correlation: float


def stability_report(rows: list[TrackerRow]) -> list[StabilityPoint]:
    """How stable the relative view is month over month.

    For each schedule date, the Spearman rank correlation (average ranks for
    ties) between that month's tracker values and the final month's, over
    the sources present at both dates. Empirical companion output, not an
    assertion.
    """
    by_date: dict[date, dict[int, Decimal]] = {}
    for row in rows:
        by_date.setdefault(row.as_of, {})[row.source_id] = row.value
    if not by_date:
        return []
    dates = sorted(by_date)
    final = by_date[dates[-1]]
    report = []
    for as_of in dates:
        current = by_date[as_of]
        common = sorted(set(current) & set(final))
        rho = _spearman(
            [current[sid] for sid in common],
            [final[sid] for sid in common],
        )
        report.append(StabilityPoint(as_of=as_of, n_sources=len(common), rank_correlation=rho))
    return report


def _average_ranks(values: list[Decimal]) -> list[Fraction]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks: list[Fraction] = [Fraction(0)] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = Fraction(i + j + 2, 2)  # 1-based average of positions i..j
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        i = j + 1
    return ranks


def _spearman(a: list[Decimal], b: list[Decimal]) -> float:
    n = len(a)
    if n < 2:
        return 1.0
    ra = _average_ranks(a)
    rb = _average_ranks(b)
    mean = Fraction(n + 1, 2)
    cov = sum((x - mean) * (y - mean) for x, y in zip(ra, rb))
    var_a = sum((x - mean) ** 2 for x in ra)
    var_b = sum((y - mean) ** 2 for y in rb)
    if var_a == 0 or var_b == 0:
        return 1.0
    return float(cov) / (math.sqrt(float(var_a)) * math.sqrt(float(var_b)))
