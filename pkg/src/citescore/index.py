"""Citation index: ingestion, load-date snapshots, and title-chain resolution.

Records arrive as line-delimited JSON (one object per line, UTF-8). Ingestion
is single-writer; a built index is treated as read-only, and a snapshot taken
from it is genuinely immutable (read-only mappings, tuple of links) so it can
be shared freely across metric computations.
"""

from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass, field
from datetime import date
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .records import (
    DOC_TYPES,
    SOURCE_TYPES,
    CitationLink,
    PublicationRecord,
    SourceRecord,
)

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")

_SOURCE_FIELDS = {
    "source_id",
    "title",
    "source_type",
    "asjc_codes",
    "is_actively_indexed",
    "predecessor_source_id",
}
_PUBLICATION_FIELDS = {
    "pub_id",
    "source_id",
    "sort_year",
    "load_date",
    "doc_type",
    "is_article_in_press",
}
_LINK_FIELDS = {"citing_pub_id", "cited_pub_id"}


class IngestError(Exception):
    """Hard ingestion failure: duplicate identifiers or a corrupt title chain."""


@dataclass
class IngestReport:
    """Accepted/rejected counts plus human-readable warnings."""

    sources_accepted: int = 0
    sources_rejected: int = 0
    publications_accepted: int = 0
    publications_rejected: int = 0
    links_accepted: int = 0
    links_rejected: int = 0
    links_collapsed: int = 0
    warnings: list[str] = field(default_factory=list)

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    def counts(self) -> dict[str, int]:
        return {
            "sources_accepted": self.sources_accepted,
            "sources_rejected": self.sources_rejected,
            "publications_accepted": self.publications_accepted,
            "publications_rejected": self.publications_rejected,
            "links_accepted": self.links_accepted,
            "links_rejected": self.links_rejected,
            "links_collapsed": self.links_collapsed,
        }


class _LineError(Exception):
    """Per-line validation failure; the line is rejected and ingestion continues."""


def _parse_json_line(kind: str, lineno: int, line: str) -> dict:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise _LineError(f"{kind} line {lineno}: invalid JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise _LineError(f"{kind} line {lineno}: expected an object")
    return obj


def _require(obj: dict, key: str, kind: str, lineno: int):
    if key not in obj:
        raise _LineError(f"{kind} line {lineno}: missing field {key!r}")
    return obj[key]


def _as_int(value, key: str, kind: str, lineno: int) -> int:
    # bool is an int subclass; a JSON true/false is not an identifier.
    if isinstance(value, bool) or not isinstance(value, int):
        raise _LineError(f"{kind} line {lineno}: field {key!r} must be an integer")
    return value


def _as_bool(value, key: str, kind: str, lineno: int) -> bool:
    if not isinstance(value, bool):
        raise _LineError(f"{kind} line {lineno}: field {key!r} must be a boolean")
    return value


def _as_str(value, key: str, kind: str, lineno: int) -> str:
    if not isinstance(value, str) or not value:
        raise _LineError(f"{kind} line {lineno}: field {key!r} must be a non-empty string")
    return value


def _warn_unknown_fields(obj: dict, known: set[str], kind: str, lineno: int, report: IngestReport) -> None:
    for key in obj:
        if key not in known:
            report.warn(f"{kind} line {lineno}: ignoring unknown field {key!r}")


def _parse_source(lineno: int, line: str, report: IngestReport) -> SourceRecord:
    obj = _parse_json_line("sources", lineno, line)
    _warn_unknown_fields(obj, _SOURCE_FIELDS, "sources", lineno, report)
    source_id = _as_int(_require(obj, "source_id", "sources", lineno), "source_id", "sources", lineno)
    title = _as_str(_require(obj, "title", "sources", lineno), "title", "sources", lineno)
    source_type = _as_str(_require(obj, "source_type", "sources", lineno), "source_type", "sources", lineno)
    if source_type not in SOURCE_TYPES:
        raise _LineError(f"sources line {lineno}: unknown source_type {source_type!r}")
    raw_codes = _require(obj, "asjc_codes", "sources", lineno)
    if not isinstance(raw_codes, list) or not raw_codes:
        raise _LineError(f"sources line {lineno}: asjc_codes must be a non-empty list")
    codes = set()
    for code in raw_codes:
        code = _as_int(code, "asjc_codes", "sources", lineno)
        if not 1000 <= code <= 9999:
            raise _LineError(f"sources line {lineno}: ASJC code {code} is not a 4-digit code")
        codes.add(code)
    active = _as_bool(
        _require(obj, "is_actively_indexed", "sources", lineno),
        "is_actively_indexed", "sources", lineno,
    )
    predecessor = obj.get("predecessor_source_id")
    if predecessor is not None:
        predecessor = _as_int(predecessor, "predecessor_source_id", "sources", lineno)
    return SourceRecord(
        source_id=source_id,
        title=title,
        source_type=source_type,
        asjc_codes=frozenset(codes),
        is_actively_indexed=active,
        predecessor_source_id=predecessor,
    )


def _parse_publication(lineno: int, line: str, report: IngestReport) -> PublicationRecord:
    obj = _parse_json_line("publications", lineno, line)
    _warn_unknown_fields(obj, _PUBLICATION_FIELDS, "publications", lineno, report)
    pub_id = _as_str(_require(obj, "pub_id", "publications", lineno), "pub_id", "publications", lineno)
    source_id = _as_int(_require(obj, "source_id", "publications", lineno), "source_id", "publications", lineno)
    sort_year = _as_int(_require(obj, "sort_year", "publications", lineno), "sort_year", "publications", lineno)
    raw_date = _as_str(_require(obj, "load_date", "publications", lineno), "load_date", "publications", lineno)
    if not _DATE_RE.match(raw_date):
        raise _LineError(f"publications line {lineno}: load_date {raw_date!r} is not YYYY-MM-DD")
    try:
        load_date = date.fromisoformat(raw_date)
    except ValueError as exc:
        raise _LineError(f"publications line {lineno}: load_date {raw_date!r}: {exc}") from exc
    doc_type = _as_str(_require(obj, "doc_type", "publications", lineno), "doc_type", "publications", lineno)
    if doc_type not in DOC_TYPES:
        raise _LineError(f"publications line {lineno}: unknown doc_type {doc_type!r}")
    aip = _as_bool(
        _require(obj, "is_article_in_press", "publications", lineno),
        "is_article_in_press", "publications", lineno,
    )
    return PublicationRecord(
        pub_id=pub_id,
        source_id=source_id,
        sort_year=sort_year,
        load_date=load_date,
        doc_type=doc_type,
        is_article_in_press=aip,
    )


def _parse_link(lineno: int, line: str, report: IngestReport) -> CitationLink:
    obj = _parse_json_line("links", lineno, line)
    _warn_unknown_fields(obj, _LINK_FIELDS, "links", lineno, report)
    citing = _as_str(_require(obj, "citing_pub_id", "links", lineno), "citing_pub_id", "links", lineno)
    cited = _as_str(_require(obj, "cited_pub_id", "links", lineno), "cited_pub_id", "links", lineno)
    return CitationLink(citing_pub_id=citing, cited_pub_id=cited)


def _resolve_chain(sources: Mapping[int, SourceRecord], source_id: int) -> frozenset[int]:
    if source_id not in sources:
        raise KeyError(f"unknown source_id {source_id}")
    chain = {source_id}
    current = sources[source_id].predecessor_source_id
    while current is not None:
        # Cycles and dangling pointers are ruled out at ingest.
        chain.add(current)
        current = sources[current].predecessor_source_id
    return frozenset(chain)


class CitationIndex:
    """In-memory citation index built by :func:`ingest`.

    Holds the full record set regardless of load date; use :func:`snapshot`
    to obtain the immutable view the metrics operate on.
    """

    def __init__(
        self,
        sources: dict[int, SourceRecord],
        publications: dict[str, PublicationRecord],
        links: tuple[CitationLink, ...],
        successor: dict[int, int],
    ) -> None:
        self.sources: Mapping[int, SourceRecord] = MappingProxyType(sources)
        self.publications: Mapping[str, PublicationRecord] = MappingProxyType(publications)
        self.links = links
        self.successor: Mapping[int, int] = MappingProxyType(successor)

    def resolve_title_chain(self, source_id: int) -> frozenset[int]:
        """The source itself plus the transitive closure of its predecessors."""
        return _resolve_chain(self.sources, source_id)

    def is_chain_terminal(self, source_id: int) -> bool:
        """True when no other source names this one as its predecessor."""
        if source_id not in self.sources:
            raise KeyError(f"unknown source_id {source_id}")
        return source_id not in self.successor


@dataclass(frozen=True)
class IndexSnapshot:
    """The index as it existed at a cutoff date (load_date <= cutoff, inclusive).

    Contains every source, the publications loaded by the cutoff, and only
    those links whose two endpoints both survive the filter. Immutable and
    safe to share across concurrent readers.
    """

    cutoff: date
    sources: Mapping[int, SourceRecord]
    publications: Mapping[str, PublicationRecord]
    links: tuple[CitationLink, ...]
    successor: Mapping[int, int]

    def resolve_title_chain(self, source_id: int) -> frozenset[int]:
        return _resolve_chain(self.sources, source_id)

    def is_chain_terminal(self, source_id: int) -> bool:
        if source_id not in self.sources:
            raise KeyError(f"unknown source_id {source_id}")
        return source_id not in self.successor


def ingest(
    source_lines: Iterable[str],
    publication_lines: Iterable[str],
    link_lines: Iterable[str],
) -> tuple[CitationIndex, IngestReport]:
    """Build an index from line-delimited record streams.

    Malformed lines, dangling references, and invariant-violating links are
    rejected with a warning and ingestion continues. Duplicate identifiers
    and corrupt title chains (cycles, shared predecessors) raise IngestError.
    """
    report = IngestReport()

    sources: dict[int, SourceRecord] = {}
    for lineno, line in _numbered(source_lines):
        try:
            record = _parse_source(lineno, line, report)
        except _LineError as exc:
            report.sources_rejected += 1
            report.warn(str(exc))
            continue
        if record.source_id in sources:
            raise IngestError(f"sources line {lineno}: duplicate source_id {record.source_id}")
        sources[record.source_id] = record
        report.sources_accepted += 1

    _validate_chains(sources, report)
    successor: dict[int, int] = {}
    for record in sources.values():
        if record.predecessor_source_id is not None:
            successor[record.predecessor_source_id] = record.source_id

    publications: dict[str, PublicationRecord] = {}
    for lineno, line in _numbered(publication_lines):
        try:
            record = _parse_publication(lineno, line, report)
        except _LineError as exc:
            report.publications_rejected += 1
            report.warn(str(exc))
            continue
        if record.pub_id in publications:
            raise IngestError(f"publications line {lineno}: duplicate pub_id {record.pub_id!r}")
        if record.source_id not in sources:
            report.publications_rejected += 1
            report.warn(
                f"publications line {lineno}: unknown source_id {record.source_id}, record rejected"
            )
            continue
        publications[record.pub_id] = record
        report.publications_accepted += 1

    links: list[CitationLink] = []
    seen_pairs: set[tuple[str, str]] = set()
    for lineno, line in _numbered(link_lines):
        try:
            link = _parse_link(lineno, line, report)
        except _LineError as exc:
            report.links_rejected += 1
            report.warn(str(exc))
            continue
        if link.citing_pub_id == link.cited_pub_id:
            report.links_rejected += 1
            report.warn(f"links line {lineno}: publication cannot cite itself ({link.citing_pub_id!r})")
            continue
        citing = publications.get(link.citing_pub_id)
        cited = publications.get(link.cited_pub_id)
        if citing is None or cited is None:
            missing = link.citing_pub_id if citing is None else link.cited_pub_id
            report.links_rejected += 1
            report.warn(f"links line {lineno}: dangling endpoint {missing!r}, link rejected")
            continue
        if citing.is_article_in_press:
            report.links_rejected += 1
            report.warn(
                f"links line {lineno}: citing publication {link.citing_pub_id!r} is an "
                "article-in-press and cannot give citations, link rejected"
            )
            continue
        pair = (link.citing_pub_id, link.cited_pub_id)
        if pair in seen_pairs:
            report.links_collapsed += 1
            continue
        seen_pairs.add(pair)
        links.append(link)
        report.links_accepted += 1

    index = CitationIndex(sources, publications, tuple(links), successor)
    return index, report


def _validate_chains(sources: dict[int, SourceRecord], report: IngestReport) -> None:
    """Drop dangling predecessor pointers; reject cycles and shared predecessors."""
    for sid, record in list(sources.items()):
        pred = record.predecessor_source_id
        if pred is not None and pred not in sources:
            report.warn(
                f"source {sid}: predecessor_source_id {pred} does not exist, pointer dropped"
            )
            sources[sid] = dataclasses.replace(record, predecessor_source_id=None)

    claimed: dict[int, int] = {}
    for sid, record in sources.items():
        pred = record.predecessor_source_id
        if pred is None:
            continue
        if pred in claimed:
            raise IngestError(
                f"sources {claimed[pred]} and {sid} share predecessor {pred}; "
                "title chains must be linear"
            )
        claimed[pred] = sid

    for sid in sources:
        seen = {sid}
        current = sources[sid].predecessor_source_id
        while current is not None:
            if current in seen:
                raise IngestError(f"predecessor cycle detected at source {current}")
            seen.add(current)
            current = sources[current].predecessor_source_id


def _numbered(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    for lineno, line in enumerate(lines, start=1):
        if line.strip():
            yield lineno, line


def load_index(
    sources_path: str,
    publications_path: str,
    links_path: str,
) -> tuple[CitationIndex, IngestReport]:
    """Ingest the three record files from disk."""
    with open(sources_path, encoding="utf-8") as src, \
            open(publications_path, encoding="utf-8") as pubs, \
            open(links_path, encoding="utf-8") as links:
        return ingest(src, pubs, links)


def snapshot(index: CitationIndex, cutoff: date) -> IndexSnapshot:
    """Freeze the index as of a cutoff date.

    A publication is in the view iff load_date <= cutoff; a link survives iff
    both endpoints do. Sources are not load-dated and are always present.
    """
    publications = {
        pid: record
        for pid, record in index.publications.items()
        if record.load_date <= cutoff
    }
    links = tuple(
        link
        for link in index.links
        if link.citing_pub_id in publications and link.cited_pub_id in publications
    )
    return IndexSnapshot(
        cutoff=cutoff,
        sources=index.sources,
        publications=MappingProxyType(publications),
        links=links,
        successor=index.successor,
    )


def resolve_title_chain(index: CitationIndex | IndexSnapshot, source_id: int) -> frozenset[int]:
    """Module-level alias for the chain resolution both views provide."""
    return index.resolve_title_chain(source_id)
