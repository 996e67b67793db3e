"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the criterion
lines; the suite is also part of the default ``pytest`` run.
"""

import itertools
import json
import math
import random
import time
from collections import Counter
from contextlib import contextmanager
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from tetunsearch import (
    Document,
    PRESETS,
    Query,
    StrategyGrid,
    adjudicate,
    build_index,
    evaluate,
    export_qrels,
    generate_corpus,
    load_index,
    load_lexicons,
    load_topics,
    majority_vote,
    pool_runs,
    run_grid,
    save_index,
    search,
    select_judging_candidates,
)
from tetunsearch.analysis import analyze_terms, stem
from tetunsearch.collection import Judgment, journal_read
from tetunsearch.evaluation import EvalReport, render_matrix, report_to_json
from tetunsearch.index import FIELD_SCHEMES, index_to_bytes
from tetunsearch.lexicons import bundled_topics_path
from tetunsearch.retrieval import write_grid_runs
from tetunsearch.service import Campaign, build_state, create_app
from tetunsearch.trec import read_run

DATA_DIR = Path(__file__).parent / "data"


@contextmanager
def criterion(name: str, budget_seconds: float):
    started = time.perf_counter()
    try:
        yield
    except Exception:
        print(f"[FAIL] {name}")
        raise
    elapsed = time.perf_counter() - started
    if elapsed > budget_seconds:
        print(f"[FAIL] {name} (took {elapsed:.2f}s, budget {budget_seconds}s)")
        pytest.fail(f"{name}: exceeded time budget ({elapsed:.2f}s > {budget_seconds}s)")
    print(f"[PASS] {name} ({elapsed:.2f}s)")


@pytest.fixture(scope="module")
def lexicons():
    return load_lexicons()


@pytest.fixture(scope="module")
def corpus442():
    return generate_corpus()


@pytest.fixture(scope="module")
def topics5():
    return load_topics(bundled_topics_path())


@pytest.fixture(scope="module")
def grid_runs_depth30(corpus442, topics5, lexicons):
    return run_grid(corpus442, topics5, StrategyGrid(depth=30), lexicons)


def test_analyzer_fidelity(lexicons):
    with criterion("analyzer fidelity (stemmer, normalization, stopwords)", 1.0):
        suffix_rules = lexicons.stemmer_suffixes
        assert stem("selebrasaun", suffix_rules) == "selebra"
        assert stem("juramentu", suffix_rules) == "jura"
        assert stem("lohidór", suffix_rules) == "lohi"
        assert stem("nauktén", suffix_rules) == "nauk"
        assert lexicons.normalization["junho"] == "juñu"
        assert lexicons.normalization["junu"] == "juñu"
        stopword_text = "no atu ne'e ne'ebé husi ha'u sira tanba"
        assert analyze_terms(stopword_text, PRESETS["default"], lexicons) == []
        kept = analyze_terms(stopword_text, PRESETS["with_stopwords"], lexicons)
        assert kept == ["no", "atu", "ne'e", "ne'ebé", "husi", "ha'u", "sira", "tanba"]


def test_grid_arithmetic_at_paper_scale(corpus442, topics5, lexicons, grid_runs_depth30, tmp_path):
    with criterion("grid arithmetic: 12 runs, 1800-pool, 120/topic, 50 qrels", 30.0):
        paths = write_grid_runs(grid_runs_depth30, tmp_path / "runs")
        assert len(paths) == 12
        parsed = [read_run(p) for p in paths]
        assert all(len(run) == 150 for run in parsed)

        pool30 = pool_runs(parsed, depth=30)
        assert pool30.pre_dedup_total == 1800

        pool10 = pool_runs(parsed, depth=10)
        assert pool10.pre_dedup_per_topic == {q.qid: 120 for q in topics5}

        candidates = select_judging_candidates(pool10, per_query=10)
        pairs = candidates.pairs()
        assert len(pairs) == 50

        # Five simulated evaluators judge every pair; vote; export.
        judgments = [
            Judgment(qid=qid, docid=docid, evaluator_id=f"e{e}",
                     grade=(len(docid) + sum(map(ord, qid)) + e) % 4, timestamp="t")
            for e in range(5)
            for qid, docid in pairs
        ]
        adjudicated = adjudicate(judgments)
        qrels_path = tmp_path / "synthetic.qrels"
        export_qrels(adjudicated, qrels_path)
        assert len(qrels_path.read_text("utf-8").splitlines()) == 50


def test_bm25_oracle_equivalence(lexicons):
    with criterion("BM25 oracle equivalence on 25 randomized corpora", 10.0):
        config = PRESETS["default"]
        vocab = ["uma", "rai", "fatin", "bee", "malae", "knua", "dalan", "ai", "tasi", "fitun"]
        k1, b = 1.2, 0.75
        rng = random.Random(20220720)
        for trial in range(25):
            docs = [
                Document(id=f"d{i:02d}", title=" ".join(rng.choices(vocab, k=rng.randint(1, 8))))
                for i in range(rng.randint(1, 20))
            ]
            query_terms = rng.choices(vocab, k=rng.randint(1, 5))

            # Independent brute force over every document.
            doc_terms = {d.id: d.title.split() for d in docs}
            n = len(docs)
            avglen = sum(len(t) for t in doc_terms.values()) / n
            df: Counter = Counter()
            for terms in doc_terms.values():
                df.update(set(terms))
            expected = {}
            for docid, terms in doc_terms.items():
                s = 0.0
                for q in query_terms:
                    tf = terms.count(q)
                    if tf:
                        idf = math.log(1 + (n - df[q] + 0.5) / (df[q] + 0.5))
                        s += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len(terms) / avglen))
                if s > 0:
                    expected[docid] = s
            expected_order = sorted(expected.items(), key=lambda kv: (-kv[1], kv[0]))

            idx = build_index(docs, "T", config, lexicons)
            result = search(idx, Query("q", " ".join(query_terms)), config, lexicons, k=n)
            assert [e.docid for e in result.entries] == [d for d, _ in expected_order], f"trial {trial}"
            for entry, (_, want) in zip(result.entries, expected_order):
                assert abs(entry.score - want) <= 1e-9 * max(abs(entry.score), abs(want)), f"trial {trial}"


def test_metric_oracle_equivalence():
    with criterion("metric oracle equivalence on 100 randomized instances", 5.0):
        from tetunsearch import average_precision, ndcg, precision_at_k

        # Hand-computed fixtures.
        assert abs(precision_at_k(["a", "b", "c", "d", "e"], {"a", "c"}, 5) - 0.4) <= 1e-4
        assert abs(average_precision(["a", "b", "c"], {"a", "c"}) - 0.8333) <= 1e-4
        assert abs(ndcg(["b", "a"], {"a": 3, "b": 1}) - 0.7967) <= 1e-4

        rng = random.Random(442)
        for trial in range(100):
            docids = [f"d{i:02d}" for i in range(rng.randint(5, 50))]
            n_topics = rng.randint(1, 10)
            per_topic_ranked = {}
            per_topic_grades = {}
            from tetunsearch.trec import QrelsEntry, RunEntry

            run, qrels = [], []
            for t in range(n_topics):
                qid = f"q{t}"
                ranked = rng.sample(docids, rng.randint(1, len(docids)))
                per_topic_ranked[qid] = ranked
                run.extend(
                    RunEntry(qid, d, i, float(len(ranked) - i + 1), "tag")
                    for i, d in enumerate(ranked, 1)
                )
                grades = {d: rng.randint(0, 3) for d in rng.sample(docids, rng.randint(1, len(docids)))}
                per_topic_grades[qid] = grades
                qrels.extend(QrelsEntry(qid, d, g) for d, g in grades.items())
            report = evaluate(run, qrels)

            sums = {"map": 0.0, "p5": 0.0, "p10": 0.0, "ndcg": 0.0}
            with_relevant = 0
            for topic in report.topics:
                grades = per_topic_grades[topic.qid]
                relevant = {d for d, g in grades.items() if g > 0}
                ranked = per_topic_ranked[topic.qid]
                # Brute-force re-derivations.
                p5 = len([d for d in ranked[:5] if d in relevant]) / 5
                p10 = len([d for d in ranked[:10] if d in relevant]) / 10
                hits, ap_sum = 0, 0.0
                for i, d in enumerate(ranked, 1):
                    if d in relevant:
                        hits += 1
                        ap_sum += hits / i
                ap = ap_sum / len(relevant) if relevant else 0.0
                dcg = sum(grades.get(d, 0) / math.log2(i + 1) for i, d in enumerate(ranked, 1))
                ideal = sorted((g for g in grades.values() if g > 0), reverse=True)
                idcg = sum(g / math.log2(i + 1) for i, g in enumerate(ideal, 1))
                nd = dcg / idcg if idcg else 0.0
                for got, want in ((topic.p5, p5), (topic.p10, p10), (topic.ap, ap), (topic.ndcg, nd)):
                    assert abs(got - want) <= 1e-9, f"trial {trial} topic {topic.qid}"
                if relevant:
                    with_relevant += 1
                    sums["map"] += ap
                    sums["p5"] += p5
                    sums["p10"] += p10
                    sums["ndcg"] += nd
            for name in sums:
                want = sums[name] / with_relevant if with_relevant else 0.0
                assert abs(report.means[name] - want) <= 1e-9, f"trial {trial} mean {name}"


def test_majority_vote_properties():
    with criterion("majority vote: permutation invariance + strict majority", 1.0):
        rng = random.Random(50)
        for _ in range(1000):
            grades = [rng.randint(0, 3) for _ in range(rng.randint(1, 9))]
            shuffled = grades.copy()
            rng.shuffle(shuffled)
            assert majority_vote(shuffled) == majority_vote(grades)
        for vector in itertools.product(range(4), repeat=5):
            grade, count = Counter(vector).most_common(1)[0]
            if count >= 3:
                assert majority_vote(list(vector)) == grade, vector


def test_end_to_end_determinism(tmp_path):
    with criterion("determinism: two executions, byte-identical artifacts", 60.0):
        digests = []
        for name in ("first", "second"):
            root = tmp_path / name
            root.mkdir()
            corpus = generate_corpus()
            topics = load_topics(bundled_topics_path())
            lexicons = load_lexicons()

            index = build_index(corpus, "T", PRESETS["default"], lexicons)
            index_path = root / "default_T.tix"
            save_index(index, index_path)

            runs = run_grid(corpus, topics, StrategyGrid(depth=30), lexicons)
            run_paths = write_grid_runs(runs, root / "runs")

            pool = pool_runs([r.entries for r in runs], depth=10)
            candidates = select_judging_candidates(pool, per_query=10)
            adjudicated = {(q, d): (len(d) + sum(map(ord, q))) % 4 for q, d in candidates.pairs()}
            qrels_path = root / "q.qrels"
            entries = export_qrels(adjudicated, qrels_path)

            reports = [evaluate(list(r.entries), entries) for r in runs]
            report_path = root / "reports.json"
            report_path.write_text(
                json.dumps([report_to_json(r) for r in reports], sort_keys=True), "utf-8"
            )

            artifact_bytes = [index_path.read_bytes(), qrels_path.read_bytes(),
                              report_path.read_bytes()]
            artifact_bytes.extend(p.read_bytes() for p in sorted(run_paths))
            digests.append(artifact_bytes)
        assert digests[0] == digests[1]


def test_index_round_trip_and_scheme_monotonicity(corpus442, lexicons, tmp_path):
    with criterion("index round-trip on all schemes + vocabulary monotonicity", 30.0):
        vocab = {}
        for scheme in FIELD_SCHEMES:
            idx = build_index(corpus442, scheme, PRESETS["default"], lexicons)
            path = tmp_path / f"{scheme}.tix"
            save_index(idx, path)
            loaded = load_index(path)
            assert loaded == idx
            assert index_to_bytes(loaded) == path.read_bytes()
            vocab[scheme] = idx.vocabulary()
        assert vocab["T"] <= vocab["T+C"] <= vocab["T+L+C"]


def test_table4_shaped_report_golden_bytes():
    with criterion("Table-4-shaped report renders to golden bytes", 1.0):
        values = {
            ("default", "T"): (0.709, 0.800, 0.533, 0.775),
            ("default", "T+C"): (0.662, 0.667, 0.567, 0.715),
            ("default", "L+C"): (0.649, 0.633, 0.533, 0.780),
            ("default", "T+L+C"): (0.652, 0.633, 0.517, 0.732),
            ("with_stopwords", "T"): (0.572, 0.600, 0.483, 0.715),
            ("with_stopwords", "T+C"): (0.612, 0.600, 0.533, 0.705),
            ("with_stopwords", "L+C"): (0.593, 0.600, 0.500, 0.688),
            ("with_stopwords", "T+L+C"): (0.648, 0.667, 0.517, 0.729),
            ("without_stemming", "T"): (0.731, 0.800, 0.550, 0.790),
            ("without_stemming", "T+C"): (0.671, 0.700, 0.550, 0.730),
            ("without_stemming", "L+C"): (0.650, 0.700, 0.517, 0.719),
            ("without_stemming", "T+L+C"): (0.650, 0.700, 0.550, 0.738),
        }
        reports = [
            EvalReport(run_tag=f"{p}_{s}", topics=(),
                       means={"map": m, "p5": p5, "p10": p10, "ndcg": nd})
            for (p, s), (m, p5, p10, nd) in values.items()
        ]
        text = render_matrix(
            reports,
            presets=("default", "with_stopwords", "without_stemming"),
            schemes=("T", "T+C", "L+C", "T+L+C"),
        )
        golden = (DATA_DIR / "report_golden.txt").read_text("utf-8")
        assert text == golden


def test_secondary_judging_flow_over_http(corpus442, topics5, lexicons, grid_runs_depth30, tmp_path):
    with criterion("[secondary] scripted 5-evaluator judging flow over HTTP", 30.0):
        pool = pool_runs([r.entries for r in grid_runs_depth30], depth=10)
        candidates = select_judging_candidates(pool, per_query=10)
        evaluators = [f"e{i}" for i in range(1, 6)]
        journal_path = tmp_path / "journal.jsonl"
        state = build_state(
            corpus442,
            lexicons,
            scheme="T+L+C",
            campaign=Campaign(topics=topics5, candidates=candidates.topics,
                              evaluators=evaluators),
            journal_path=journal_path,
        )
        client = TestClient(create_app(state))

        def grade_for(qid: str, docid: str, evaluator: str) -> int:
            return (len(docid) + sum(map(ord, qid + evaluator))) % 4

        # Each evaluator walks /judge/next to completion.
        for evaluator in evaluators:
            for _ in range(51):
                payload = client.get("/judge/next", params={"evaluator": evaluator}).json()
                if payload["complete"]:
                    break
                response = client.post("/judge", json={
                    "qid": payload["qid"],
                    "docid": payload["docid"],
                    "evaluator": evaluator,
                    "grade": grade_for(payload["qid"], payload["docid"], evaluator),
                })
                assert response.status_code == 200
            assert client.get("/judge/next", params={"evaluator": evaluator}).json()["complete"]

        progress = client.get("/campaign/progress").json()
        assert progress["total_judgments"] == 250
        assert all(v == 50 for v in progress["per_evaluator"].values())

        # Journal replay + vote equals batch voting on the same grades.
        replayed = adjudicate(journal_read(journal_path))
        batch = adjudicate([
            Judgment(qid=qid, docid=docid, evaluator_id=e,
                     grade=grade_for(qid, docid, e), timestamp="t")
            for e in evaluators
            for qid, docid in candidates.pairs()
        ])
        assert replayed == batch
        http_qrels = tmp_path / "http.qrels"
        batch_qrels = tmp_path / "batch.qrels"
        export_qrels(replayed, http_qrels)
        export_qrels(batch, batch_qrels)
        assert len(http_qrels.read_text("utf-8").splitlines()) == 50
        assert http_qrels.read_bytes() == batch_qrels.read_bytes()
