"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as the
criteria execute. Everything here is exact: integer equality, exact 2-decimal
values, or byte-for-byte file comparison.
"""

from __future__ import annotations

import json
import math
import random
import sys
from contextlib import contextmanager
from datetime import date, timedelta
from fractions import Fraction
from pathlib import Path

from citescore import (
    CorpusConfig,
    LagModel,
    compute_annual,
    count_citations,
    count_documents,
    generate_corpus,
    load_index,
    percentile_from_counts,
    quartile,
    snapshot,
)
from citescore.cli import main
from citescore.cutoffs import default_cutoff
from citescore.manifest import file_digest
from citescore.oracle import oracle_metrics
from citescore.output import write_metrics_csv, write_standings_csv

from helpers import link_line, pub_line, source_line, write_corpus


@contextmanager
def criterion(number: int, name: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number:02d} {name}: FAIL", file=sys.stderr, flush=True)
        raise
    print(f"ACCEPTANCE {number:02d} {name}: PASS", file=sys.stderr, flush=True)


def _sweep_config(seed: int) -> tuple[CorpusConfig, random.Random]:
    rng = random.Random(10_000 + seed)
    config = CorpusConfig(
        seed=seed,
        n_journals=rng.randint(4, 40),
        first_year=2012,
        last_year=rng.choice([2017, 2018]),
        pubs_per_year_mean=rng.uniform(1.5, 9.0),
        citation_rate=rng.uniform(0.2, 5.0),
        aip_fraction=rng.choice([0.0, 0.1, 0.3, 0.6]),
        rename_probability=rng.choice([0.0, 0.2, 0.5, 1.0]),
        n_categories=rng.randint(1, 8),
    )
    return config, rng


def _assert_engine_equals_oracle(
    sources_path, publications_path, links_path, year: int, cutoff: date, base: Path
) -> None:
    index, _ = load_index(sources_path, publications_path, links_path)
    view = snapshot(index, cutoff)
    rows, standings = compute_annual(view, year)
    engine_dir = base / "engine"
    engine_dir.mkdir(parents=True, exist_ok=True)
    engine_metrics = write_metrics_csv(engine_dir / "metrics.csv", rows, view.sources)
    engine_standings = write_standings_csv(engine_dir / "standings.csv", standings)
    oracle_metrics_path, oracle_standings_path = oracle_metrics(
        sources_path, publications_path, links_path, year, cutoff, base / "oracle"
    )
    assert engine_metrics.read_bytes() == oracle_metrics_path.read_bytes()
    assert engine_standings.read_bytes() == oracle_standings_path.read_bytes()


def test_criterion_01_oracle_equivalence(tmp_path):
    with criterion(1, "oracle equivalence over seeded corpora"):
        for seed in range(200):
            config, rng = _sweep_config(seed)
            paths = generate_corpus(config, tmp_path / f"c{seed}")
            year = rng.randint(config.first_year + 2, config.last_year)
            if rng.random() < 0.3:
                cutoff = date(year, rng.randint(1, 12), 28)  # mid-year partial view
            else:
                cutoff = default_cutoff(year)
            _assert_engine_equals_oracle(
                paths.sources_path, paths.publications_path, paths.links_path,
                year, cutoff, tmp_path / f"c{seed}",
            )

        # One corpus near the size caps.
        big = CorpusConfig(
            seed=20250810,
            n_journals=1000,
            first_year=2012,
            last_year=2018,
            pubs_per_year_mean=13.5,
            citation_rate=6.2,
            aip_fraction=0.2,
            rename_probability=0.15,
            n_categories=10,
        )
        paths = generate_corpus(big, tmp_path / "big")
        n_pubs = sum(1 for _ in open(paths.publications_path, encoding="utf-8"))
        n_links = sum(1 for _ in open(paths.links_path, encoding="utf-8"))
        assert n_pubs <= 100_000 and n_links <= 500_000
        assert n_pubs > 80_000 and n_links > 300_000
        _assert_engine_equals_oracle(
            paths.sources_path, paths.publications_path, paths.links_path,
            2017, date(2018, 4, 30), tmp_path / "big",
        )


def test_criterion_02_percentile_equation_fidelity():
    with criterion(2, "percentile equation on 10,000 triples"):
        rng = random.Random(271828)
        for _ in range(10_000):
            total = rng.randint(1, 2000)
            same = rng.randint(1, total)
            lower = rng.randint(0, total - same)
            expected = math.floor(Fraction(lower + Fraction(same, 2), total) * 100)
            got = percentile_from_counts(lower, same, total)
            assert got == expected
            assert 0 <= got <= 99


def test_criterion_03_quartile_banding():
    with criterion(3, "quartile banding over all 100 percentiles"):
        for p in range(100):
            if 75 <= p <= 99:
                expected = 1
            elif 50 <= p <= 74:
                expected = 2
            elif 25 <= p <= 49:
                expected = 3
            else:
                expected = 4
            assert quartile(p) == expected


def test_criterion_04_window_correctness(tmp_path):
    with criterion(4, "citing/cited year windows"):
        sources = [source_line(1, title="Target"), source_line(2, title="Citer")]
        pubs = [pub_line(f"j{year}", 1, year) for year in range(2012, 2019)]
        pubs += [
            pub_line("k2016", 2, 2016),
            pub_line("k2017a", 2, 2017), pub_line("k2017b", 2, 2017),
            pub_line("k2018", 2, 2018),
        ]
        links = [
            link_line("k2016", "j2013"), link_line("k2016", "j2014"), link_line("k2016", "j2015"),
            link_line("k2017a", "j2013"), link_line("k2017a", "j2014"),
            link_line("k2017a", "j2016"), link_line("k2017a", "j2017"),
            link_line("k2017b", "j2015"), link_line("k2017b", "j2016"),
            link_line("k2018", "j2015"), link_line("k2018", "j2017"), link_line("k2018", "j2018"),
        ]
        s, p, l = write_corpus(tmp_path, sources, pubs, links)
        index, _ = load_index(s, p, l)
        view = snapshot(index, date(2099, 1, 1))

        # 2017: cited window is exactly 2014-2016, citing year exactly 2017.
        assert count_documents(view, 1, 2017) == 3
        assert count_citations(view, 1, 2017) == 4  # j2014, j2016, j2015, j2016
        # The same links do not leak into neighbouring years.
        assert count_citations(view, 1, 2016) == 3  # k2016 -> j2013/j2014/j2015
        assert count_citations(view, 1, 2018) == 2  # k2018 -> j2015, j2017

        rows, _ = compute_annual(view, 2017)
        target = next(r for r in rows if r.source_id == 1)
        assert (target.citations, target.documents) == (4, 3)
        assert str(target.citescore) == "1.33"


def test_criterion_05_articles_in_press_excluded(tmp_path):
    with criterion(5, "articles-in-press contribute nothing"):
        sources = [source_line(1), source_line(2)]
        pubs = [pub_line(f"d{i}", 1, 2015) for i in range(3)]
        pubs += [pub_line("aip1", 1, 2015, aip=True), pub_line("aip2", 1, 2016, aip=True)]
        pubs += [pub_line("c1", 2, 2017), pub_line("c2", 2, 2017)]
        links = [
            link_line("c1", "d0"), link_line("c2", "d1"),
            link_line("c1", "aip1"), link_line("c2", "aip2"),  # cited AIP: no effect
            link_line("aip1", "d0"),  # citing AIP: rejected at ingest
        ]
        s, p, l = write_corpus(tmp_path, sources, pubs, links)
        index, report = load_index(s, p, l)
        assert report.links_rejected == 1
        view = snapshot(index, date(2099, 1, 1))
        assert count_documents(view, 1, 2017) == 3  # AIP records not in B
        assert count_citations(view, 1, 2017) == 2  # links to AIP not in A
        rows, _ = compute_annual(view, 2017)
        row = next(r for r in rows if r.source_id == 1)
        assert (row.citations, row.documents, row.percent_cited) == (2, 3, 67)

        # Against the independent oracle as well.
        _assert_engine_equals_oracle(s, p, l, 2017, date(2099, 1, 1), tmp_path / "diff")


def test_criterion_06_default_cutoff_table(tmp_path):
    with criterion(6, "default load-date cutoffs recorded in manifests"):
        sources = [source_line(1)]
        pubs = [pub_line("d", 1, 2015, load_date="2015-06-01")]
        s, p, l = write_corpus(tmp_path, sources, pubs, [])
        expected = {year: f"{year + 1}-05-31" for year in range(2011, 2017)}
        expected[2017] = "2018-04-30"
        for year, cutoff in expected.items():
            out = tmp_path / f"y{year}"
            code = main([
                "compute", "--sources", str(s), "--pubs", str(p), "--links", str(l),
                "--year", str(year), "--out", str(out),
            ])
            assert code == 0
            manifest = json.loads((out / "manifest.json").read_text())
            assert manifest["parameters"]["cutoff"] == cutoff


def test_criterion_07_tracker_convergence(tmp_path):
    with criterion(7, "tracker converges to the annual value"):
        for seed in range(10):
            config = CorpusConfig(
                seed=seed,
                n_journals=8 + seed,
                first_year=2013,
                last_year=2018,
                pubs_per_year_mean=4.0,
                citation_rate=2.5,
                rename_probability=0.2,
                aip_fraction=0.2,
                lag=LagModel(short_weight=1.0, short_days=(1, 12), long_days=(30, 40)),
            )
            paths = generate_corpus(config, tmp_path / f"c{seed}")
            corpus_flags = [
                "--sources", str(paths.sources_path),
                "--pubs", str(paths.publications_path),
                "--links", str(paths.links_path),
            ]
            annual_out = tmp_path / f"annual{seed}"
            tracker_out = tmp_path / f"tracker{seed}"
            assert main(["compute", *corpus_flags, "--year", "2017",
                         "--out", str(annual_out)]) == 0
            assert main(["tracker", *corpus_flags, "--year", "2017",
                         "--from", "2017-06", "--to", "2018-04",
                         "--out", str(tracker_out)]) == 0
            annual = {
                line.split(",")[0]: line.split(",")
                for line in (annual_out / "metrics.csv").read_text().splitlines()[1:]
            }
            final = {
                fields[0]: fields
                for fields in (
                    line.split(",")
                    for line in (tracker_out / "tracker.csv").read_text().splitlines()[1:]
                )
                if fields[2] == "2018-04-30"
            }
            assert final.keys() == annual.keys()
            for sid, fields in final.items():
                assert fields[5] == annual[sid][3]  # tracker_value == citescore, exact 2dp


def test_criterion_08_merge_invariance(tmp_path):
    with criterion(8, "renaming a journal leaves its metrics row unchanged"):
        checked = 0
        for seed in (11, 22, 33, 44, 55):
            config = CorpusConfig(seed=seed, n_journals=12, rename_probability=0.0)
            paths = generate_corpus(config, tmp_path / f"control{seed}")
            control_index, _ = load_index(
                paths.sources_path, paths.publications_path, paths.links_path
            )
            cutoff = date(2018, 5, 31)
            control_rows, control_standings = compute_annual(
                snapshot(control_index, cutoff), 2017
            )
            control_by_id = {r.source_id: r for r in control_rows}
            if not control_by_id:
                continue
            victim = sorted(control_by_id)[seed % len(control_by_id)]

            # Rewrite the corpus: the victim's pre-2016 publications move to a
            # fresh predecessor source id.
            former_id = 99_000 + seed
            renamed_dir = tmp_path / f"renamed{seed}"
            renamed_dir.mkdir()
            source_lines = []
            for line in paths.sources_path.read_text().splitlines():
                obj = json.loads(line)
                if obj["source_id"] == victim:
                    former = dict(obj)
                    former["source_id"] = former_id
                    former["title"] = obj["title"] + " (former title)"
                    source_lines.append(json.dumps(former))
                    obj["predecessor_source_id"] = former_id
                source_lines.append(json.dumps(obj))
            pub_lines = []
            for line in paths.publications_path.read_text().splitlines():
                obj = json.loads(line)
                if obj["source_id"] == victim and obj["sort_year"] < 2016:
                    obj["source_id"] = former_id
                pub_lines.append(json.dumps(obj))
            (renamed_dir / "sources.jsonl").write_text("\n".join(source_lines) + "\n")
            (renamed_dir / "publications.jsonl").write_text("\n".join(pub_lines) + "\n")

            renamed_index, report = load_index(
                renamed_dir / "sources.jsonl",
                renamed_dir / "publications.jsonl",
                paths.links_path,
            )
            assert not report.warnings
            renamed_rows, renamed_standings = compute_annual(
                snapshot(renamed_index, cutoff), 2017
            )
            renamed_by_id = {r.source_id: r for r in renamed_rows}
            assert renamed_by_id.keys() == control_by_id.keys()
            assert renamed_by_id[victim] == control_by_id[victim]
            assert renamed_standings == control_standings
            checked += 1
        assert checked == 5


def test_criterion_09_count_monotonicity(tmp_path):
    with criterion(9, "counts are non-decreasing in the cutoff"):
        rng = random.Random(5150)
        triples = 0
        for seed in range(10):
            config = CorpusConfig(seed=100 + seed, n_journals=10, citation_rate=3.0)
            paths = generate_corpus(config, tmp_path / f"c{seed}")
            index, _ = load_index(
                paths.sources_path, paths.publications_path, paths.links_path
            )
            terminals = [sid for sid in index.sources if index.is_chain_terminal(sid)]
            for _ in range(5):
                sid = rng.choice(terminals)
                year = rng.randint(2014, 2018)
                d1 = date(2013, 1, 1) + timedelta(days=rng.randint(0, 2200))
                d2 = d1 + timedelta(days=rng.randint(0, 1100))
                early, late = snapshot(index, d1), snapshot(index, d2)
                assert count_citations(early, sid, year) <= count_citations(late, sid, year)
                assert count_documents(early, sid, year) <= count_documents(late, sid, year)
                triples += 1
        assert triples == 50


def test_criterion_10_pipeline_determinism(tmp_path):
    with criterion(10, "full pipeline runs are digest-identical"):
        # Generation itself is reproducible across invocations.
        corpus_digests = []
        for tag in ("gen1", "gen2"):
            assert main(["generate", "--seed", "93", "--journals", "14",
                         "--rename-prob", "0.4", "--out", str(tmp_path / tag)]) == 0
            corpus_digests.append([
                file_digest(tmp_path / tag / name)
                for name in ("sources.jsonl", "publications.jsonl", "links.jsonl")
            ])
        assert corpus_digests[0] == corpus_digests[1]

        # Downstream stages over the same inputs: every output, manifests
        # included, is byte-identical run to run.
        corpus = tmp_path / "gen1"
        flags = [
            "--sources", str(corpus / "sources.jsonl"),
            "--pubs", str(corpus / "publications.jsonl"),
            "--links", str(corpus / "links.jsonl"),
        ]
        digests = []
        for tag in ("first", "second"):
            base = tmp_path / tag
            assert main(["compute", *flags, "--year", "2017", "--out", str(base / "annual")]) == 0
            assert main(["tracker", *flags, "--year", "2017", "--from", "2017-06",
                         "--to", "2018-04", "--out", str(base / "tracker")]) == 0
            assert main(["verify", *flags, "--year", "2017", "--out", str(base / "verify")]) == 0
            digests.append({
                rel: file_digest(base / rel)
                for rel in (
                    "annual/metrics.csv", "annual/standings.csv", "annual/manifest.json",
                    "tracker/tracker.csv", "tracker/manifest.json",
                    "verify/engine/metrics.csv", "verify/oracle/metrics.csv",
                    "verify/engine/standings.csv", "verify/oracle/standings.csv",
                    "verify/manifest.json",
                )
            })
        assert digests[0] == digests[1]
