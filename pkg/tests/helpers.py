"""Hand-built record corpora for the unit tests."""

from __future__ import annotations

import json

from citescore import ingest, snapshot
from datetime import date


def source_line(
    source_id,
    title=None,
    source_type="journal",
    asjc=(1000,),
    active=True,
    predecessor=None,
    **extra,
):
    obj = {
        "source_id": source_id,
        "title": title if title is not None else f"Journal {source_id}",
        "source_type": source_type,
        "asjc_codes": list(asjc),
        "is_actively_indexed": active,
    }
    if predecessor is not None:
        obj["predecessor_source_id"] = predecessor
    obj.update(extra)
    return json.dumps(obj)


def pub_line(
    pub_id,
    source_id,
    sort_year,
    load_date="2015-01-10",
    doc_type="article",
    aip=False,
    **extra,
):
    obj = {
        "pub_id": pub_id,
        "source_id": source_id,
        "sort_year": sort_year,
        "load_date": load_date,
        "doc_type": doc_type,
        "is_article_in_press": aip,
    }
    obj.update(extra)
    return json.dumps(obj)


def link_line(citing, cited, **extra):
    obj = {"citing_pub_id": citing, "cited_pub_id": cited}
    obj.update(extra)
    return json.dumps(obj)


def build_index(sources, pubs, links):
    return ingest(sources, pubs, links)


def build_snapshot(sources, pubs, links, cutoff=date(2099, 1, 1)):
    """Index the records and freeze a view; the default cutoff keeps everything."""
    index, report = ingest(sources, pubs, links)
    return snapshot(index, cutoff), report


def write_corpus(tmp_path, sources, pubs, links):
    paths = []
    for name, lines in (("sources", sources), ("publications", pubs), ("links", links)):
        path = tmp_path / f"{name}.jsonl"
        path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        paths.append(path)
    return tuple(paths)
