"""The annual metrics basket: CiteScore, Citations, Documents, %Cited, and
per-ASJC-category Percentile / Rank / Quartile.

All arithmetic is exact. The score is the citation count divided by the
document count as a rational number, rounded half-away-from-zero to exactly
two decimal places; no binary floating point is involved anywhere, so output
is reproducible bit-for-bit across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Iterable, Mapping

from .index import IndexSnapshot
from .records import ELIGIBLE_SOURCE_TYPES

# The cited publication period spans the three years before the citing year.
CITED_WINDOW_YEARS = 3


class IneligibleError(ValueError):
    """Raised when a score is requested for a source that cannot receive one."""


@dataclass(frozen=True)
class MetricsRow:
    """Per-source annual metrics. citescore always carries exactly 2 decimals."""

    source_id: int
    year: int
    citescore: Decimal
    citations: int
    documents: int
    percent_cited: int


@dataclass(frozen=True)
class CategoryStanding:
    """Relative standing of one source inside one ASJC category."""

    source_id: int
    asjc_code: int
    rank: int
    n_in_category: int
    percentile: int
    quartile: int


def cited_window(year: int) -> range:
    """The cited publication years contributing to the given citing year."""
    return range(year - CITED_WINDOW_YEARS, year)


def _round_ratio_to_hundredths(numerator: int, denominator: int) -> int:
    """round(100 * numerator / denominator) with ties away from zero.

    Exact integer arithmetic; inputs are non-negative counts.
    """
    if numerator < 0 or denominator <= 0:
        raise ValueError("ratio must have a non-negative numerator and positive denominator")
    return (200 * numerator + denominator) // (2 * denominator)


def _hundredths_to_decimal(hundredths: int) -> Decimal:
    return Decimal(hundredths).scaleb(-2)


def score_from_counts(citations: int, documents: int) -> Decimal:
    """Exact 2-decimal score for a citation/document pair."""
    if documents < 1:
        raise IneligibleError("documents count is zero; no score is defined")
    return _hundredths_to_decimal(_round_ratio_to_hundredths(citations, documents))


def count_documents(snapshot: IndexSnapshot, source_id: int, year: int) -> int:
    """Documents in the cited window, attributed across the whole title chain.

    Counts publications of every document type except articles-in-press.
    """
    chain = snapshot.resolve_title_chain(source_id)
    window = cited_window(year)
    return sum(
        1
        for record in snapshot.publications.values()
        if record.source_id in chain
        and not record.is_article_in_press
        and record.sort_year in window
    )


def count_citations(snapshot: IndexSnapshot, source_id: int, year: int) -> int:
    """Citations received in the citing year by the chain's in-window documents.

    The citing side is unrestricted: any source, any document type, except
    articles-in-press (which cannot give citations). Each distinct link
    counts once.
    """
    chain = snapshot.resolve_title_chain(source_id)
    window = cited_window(year)
    total = 0
    for link in snapshot.links:
        citing = snapshot.publications[link.citing_pub_id]
        if citing.sort_year != year or citing.is_article_in_press:
            continue
        cited = snapshot.publications[link.cited_pub_id]
        if (
            cited.source_id in chain
            and cited.sort_year in window
            and not cited.is_article_in_press
        ):
            total += 1
    return total


def citescore(snapshot: IndexSnapshot, source_id: int, year: int) -> Decimal:
    """Citations divided by documents, to exactly two decimal places."""
    documents = count_documents(snapshot, source_id, year)
    if documents < 1:
        raise IneligibleError(
            f"source {source_id} has no documents in the {year} cited window"
        )
    citations = count_citations(snapshot, source_id, year)
    return score_from_counts(citations, documents)


def percent_cited(snapshot: IndexSnapshot, source_id: int, year: int) -> int:
    """Share of denominator documents with at least one qualifying citation,
    as an integer percentage (ties round up)."""
    documents = count_documents(snapshot, source_id, year)
    if documents < 1:
        raise IneligibleError(
            f"source {source_id} has no documents in the {year} cited window"
        )
    chain = snapshot.resolve_title_chain(source_id)
    window = cited_window(year)
    cited_ids: set[str] = set()
    for link in snapshot.links:
        citing = snapshot.publications[link.citing_pub_id]
        if citing.sort_year != year or citing.is_article_in_press:
            continue
        cited = snapshot.publications[link.cited_pub_id]
        if (
            cited.source_id in chain
            and cited.sort_year in window
            and not cited.is_article_in_press
        ):
            cited_ids.add(cited.pub_id)
    return _round_ratio_to_hundredths(len(cited_ids), documents)


def is_eligible(snapshot: IndexSnapshot, source_id: int, year: int) -> bool:
    """Eligibility gate for receiving metrics.

    Requires active indexing, a serial source type, at least one document in
    the cited window, and being the current (chain-terminal) title; former
    titles are folded into their successor and never scored on their own.
    """
    source = snapshot.sources.get(source_id)
    if source is None:
        raise KeyError(f"unknown source_id {source_id}")
    if not source.is_actively_indexed:
        return False
    if source.source_type not in ELIGIBLE_SOURCE_TYPES:
        return False
    if not snapshot.is_chain_terminal(source_id):
        return False
    return count_documents(snapshot, source_id, year) >= 1


def percentile_from_counts(lower: int, same: int, total: int) -> int:
    """floor(((L + 0.5 * S) / N) * 100): the percentile for a score that S
    category members share while L score strictly lower, of N total.

    Rounding down means the result never reaches 100; a lone journal in its
    category lands on 50.
    """
    if same < 1 or lower < 0 or total < lower + same:
        raise ValueError(f"inconsistent counts L={lower} S={same} N={total}")
    value = (100 * (2 * lower + same)) // (2 * total)
    assert 0 <= value <= 99
    return value


def percentile_rank(category_scores: Iterable[Decimal], score: Decimal) -> int:
    """Percentile of a score within its category's score multiset."""
    lower = 0
    same = 0
    total = 0
    for other in category_scores:
        total += 1
        if other < score:
            lower += 1
        elif other == score:
            same += 1
    if same == 0:
        raise ValueError("score is not a member of the category scores")
    return percentile_from_counts(lower, same, total)


def quartile(percentile: int) -> int:
    """Quartile band for a percentile: 1 for 75-99, 2 for 50-74, 3 for 25-49,
    4 for 0-24."""
    if not 0 <= percentile <= 99:
        raise ValueError(f"percentile {percentile} out of range [0, 99]")
    if percentile >= 75:
        return 1
    if percentile >= 50:
        return 2
    if percentile >= 25:
        return 3
    return 4


def rank_in_category(scores_by_source: Mapping[int, Decimal]) -> dict[int, tuple[int, int]]:
    """Descending competition ranking: tied scores share the smallest rank.

    Returns source_id -> (rank, n_in_category).
    """
    if not scores_by_source:
        return {}
    ordered = sorted(scores_by_source.values(), reverse=True)
    n = len(ordered)
    first_index: dict[Decimal, int] = {}
    for position, value in enumerate(ordered):
        if value not in first_index:
            first_index[value] = position
    return {
        source_id: (first_index[value] + 1, n)
        for source_id, value in scores_by_source.items()
    }


@dataclass(frozen=True)
class SourceYearCounts:
    citations: int
    documents: int
    cited_documents: int


def aggregate_counts(snapshot: IndexSnapshot, year: int) -> dict[int, SourceYearCounts]:
    """Single-pass numerator/denominator tallies for every current title.

    Equivalent to calling count_documents / count_citations per source but
    linear in the snapshot size; the per-source functions and the test suite
    cross-check the two paths.
    """
    terminal_of: dict[int, int] = {}
    for source_id in snapshot.sources:
        terminal = source_id
        while terminal in snapshot.successor:
            terminal = snapshot.successor[terminal]
        terminal_of[source_id] = terminal

    window = cited_window(year)
    documents: dict[int, int] = {}
    citations: dict[int, int] = {}
    cited_ids: dict[int, set[str]] = {}

    for record in snapshot.publications.values():
        if record.is_article_in_press or record.sort_year not in window:
            continue
        terminal = terminal_of[record.source_id]
        documents[terminal] = documents.get(terminal, 0) + 1

    for link in snapshot.links:
        citing = snapshot.publications[link.citing_pub_id]
        if citing.sort_year != year or citing.is_article_in_press:
            continue
        cited = snapshot.publications[link.cited_pub_id]
        if cited.sort_year not in window or cited.is_article_in_press:
            continue
        terminal = terminal_of[cited.source_id]
        citations[terminal] = citations.get(terminal, 0) + 1
        cited_ids.setdefault(terminal, set()).add(cited.pub_id)

    counts: dict[int, SourceYearCounts] = {}
    for source_id in snapshot.sources:
        if terminal_of[source_id] != source_id:
            continue
        counts[source_id] = SourceYearCounts(
            citations=citations.get(source_id, 0),
            documents=documents.get(source_id, 0),
            cited_documents=len(cited_ids.get(source_id, ())),
        )
    return counts


def compute_annual(
    snapshot: IndexSnapshot, year: int
) -> tuple[list[MetricsRow], list[CategoryStanding]]:
    """The full annual basket over a snapshot.

    One MetricsRow per eligible source and one CategoryStanding per
    (source, ASJC code) pair; a source has a single score but a separate
    standing in each of its categories. Output order is deterministic:
    rows by source_id, standings by (source_id, asjc_code).
    """
    counts = aggregate_counts(snapshot, year)

    rows: list[MetricsRow] = []
    scores: dict[int, Decimal] = {}
    for source_id in sorted(counts):
        source = snapshot.sources[source_id]
        tally = counts[source_id]
        if (
            not source.is_actively_indexed
            or source.source_type not in ELIGIBLE_SOURCE_TYPES
            or tally.documents < 1
        ):
            continue
        score = score_from_counts(tally.citations, tally.documents)
        pct = _round_ratio_to_hundredths(tally.cited_documents, tally.documents)
        assert 0 <= pct <= 100
        scores[source_id] = score
        rows.append(
            MetricsRow(
                source_id=source_id,
                year=year,
                citescore=score,
                citations=tally.citations,
                documents=tally.documents,
                percent_cited=pct,
            )
        )

    by_category: dict[int, dict[int, Decimal]] = {}
    for source_id, score in scores.items():
        for code in snapshot.sources[source_id].asjc_codes:
            by_category.setdefault(code, {})[source_id] = score

    standings: list[CategoryStanding] = []
    for code, members in by_category.items():
        ranks = rank_in_category(members)
        member_scores = list(members.values())
        for source_id, score in members.items():
            rank, n = ranks[source_id]
            pct = percentile_rank(member_scores, score)
            standings.append(
                CategoryStanding(
                    source_id=source_id,
                    asjc_code=code,
                    rank=rank,
                    n_in_category=n,
                    percentile=pct,
                    quartile=quartile(pct),
                )
            )
    standings.sort(key=lambda s: (s.source_id, s.asjc_code))
    return rows, standings
