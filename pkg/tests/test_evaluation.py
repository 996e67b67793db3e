"""Metrics against hand computations and an independent brute-force oracle."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tetunsearch import (
    DataError,
    QrelsEntry,
    RunEntry,
    average_precision,
    evaluate,
    ndcg,
    precision_at_k,
)
from tetunsearch.evaluation import (
    EvalReport,
    TopicMetrics,
    matrix_to_json,
    render_matrix,
    render_report,
    report_from_json,
    report_to_json,
)


# -- independent oracle implementations (list-based, no shared code) ------

def oracle_p_at_k(ranked, relevant, k):
    return len([d for d in ranked[:k] if d in relevant]) / k


def oracle_ap(ranked, relevant):
    if not relevant:
        return 0.0
    total, hits = 0.0, 0
    for i, d in enumerate(ranked, 1):
        if d in relevant:
            hits += 1
            total += hits / i
    return total / len(relevant)


def oracle_ndcg(ranked, grades):
    dcg = sum(grades.get(d, 0) / math.log2(i + 1) for i, d in enumerate(ranked, 1))
    ideal = sorted((g for g in grades.values() if g > 0), reverse=True)
    idcg = sum(g / math.log2(i + 1) for i, g in enumerate(ideal, 1))
    return dcg / idcg if idcg else 0.0


class TestPrecisionAtK:
    def test_hand_example(self):
        assert precision_at_k(["a", "b", "c", "d", "e"], {"a", "c"}, 5) == pytest.approx(0.4)

    def test_perfect_topk(self):
        assert precision_at_k(["a", "b"], {"a", "b"}, 2) == 1.0

    def test_nothing_relevant_retrieved(self):
        assert precision_at_k(["x", "y"], {"a"}, 5) == 0.0

    def test_short_list_padded_with_nonrelevant(self):
        assert precision_at_k(["a"], {"a"}, 10) == pytest.approx(0.1)

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError):
            precision_at_k(["a"], {"a"}, 0)


class TestAveragePrecision:
    def test_hand_example(self):
        assert average_precision(["a", "b", "c"], {"a", "c"}) == pytest.approx(0.8333, abs=1e-4)

    def test_all_relevant_first(self):
        assert average_precision(["a", "b", "x"], {"a", "b"}) == 1.0

    def test_unretrieved_relevant_contributes_zero(self):
        assert average_precision(["a"], {"a", "z"}) == pytest.approx(0.5)

    def test_no_relevant_docs(self):
        assert average_precision(["a"], set()) == 0.0


class TestNdcg:
    def test_ideal_order_is_one(self):
        assert ndcg(["a", "b"], {"a": 3, "b": 1}) == pytest.approx(1.0)

    def test_reversed_order_hand_value(self):
        assert ndcg(["b", "a"], {"a": 3, "b": 1}) == pytest.approx(0.7967, abs=1e-4)

    def test_all_grades_zero(self):
        assert ndcg(["a", "b"], {"a": 0, "b": 0}) == 0.0

    def test_depth_cutoff(self):
        full = ndcg(["b", "a"], {"a": 3, "b": 1})
        at_one = ndcg(["b", "a"], {"a": 3, "b": 1}, depth=1)
        assert at_one == pytest.approx((1 / 1) / (3 / 1))
        assert at_one < full

    @given(st.lists(st.integers(min_value=0, max_value=3), min_size=2, max_size=8))
    @settings(max_examples=100, deadline=None)
    def test_fixing_an_adjacent_inversion_never_decreases_ndcg(self, grades):
        docs = [f"d{i}" for i in range(len(grades))]
        graded = dict(zip(docs, grades))
        ranked = list(docs)
        for i in range(len(ranked) - 1):
            upper, lower = ranked[i], ranked[i + 1]
            if graded[upper] < graded[lower]:
                swapped = ranked.copy()
                swapped[i], swapped[i + 1] = lower, upper
                assert ndcg(swapped, graded) >= ndcg(ranked, graded) - 1e-12


def _make_run(qid, docids, tag="run_T"):
    return [
        RunEntry(qid=qid, docid=d, rank=i, score=float(len(docids) - i + 1), run_tag=tag)
        for i, d in enumerate(docids, 1)
    ]


class TestEvaluate:
    def test_single_topic_ideal_run(self):
        qrels = [QrelsEntry("q1", "a", 3), QrelsEntry("q1", "b", 1)]
        run = _make_run("q1", ["a", "b"])
        report = evaluate(run, qrels)
        assert report.means["map"] == 1.0
        assert report.means["ndcg"] == pytest.approx(1.0)
        assert report.topics[0].p5 == pytest.approx(0.4)

    def test_zero_shared_topics_is_error(self):
        with pytest.raises(DataError, match="share"):
            evaluate(_make_run("q9", ["a"]), [QrelsEntry("q1", "a", 1)])

    def test_run_topics_missing_from_qrels_ignored(self):
        qrels = [QrelsEntry("q1", "a", 1)]
        run = _make_run("q1", ["a"]) + _make_run("q2", ["b"])
        report = evaluate(run, qrels)
        assert [t.qid for t in report.topics] == ["q1"]

    def test_no_relevant_topic_excluded_from_means(self):
        qrels = [
            QrelsEntry("q1", "a", 1),
            QrelsEntry("q2", "x", 0),
        ]
        run = _make_run("q1", ["a"]) + _make_run("q2", ["x"])
        report = evaluate(run, qrels)
        assert [t.qid for t in report.topics] == ["q1", "q2"]
        assert report.means["map"] == 1.0  # q2 not averaged in

    def test_binarization_ap_depends_only_on_grade_positive(self):
        low = [QrelsEntry("q1", "a", 1)]
        high = [QrelsEntry("q1", "a", 3)]
        run = _make_run("q1", ["a", "b"])
        assert evaluate(run, low).topics[0].ap == evaluate(run, high).topics[0].ap
        assert evaluate(run, low).topics[0].ndcg == evaluate(run, high).topics[0].ndcg

    def test_qrels_topic_with_no_run_entries_scores_zero(self):
        qrels = [QrelsEntry("q1", "a", 2), QrelsEntry("q2", "b", 2)]
        run = _make_run("q1", ["a"])
        report = evaluate(run, qrels)
        by_qid = {t.qid: t for t in report.topics}
        assert by_qid["q2"].ap == 0.0
        assert report.means["map"] == pytest.approx(0.5)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_randomized_oracle_equivalence(self, seed):
        rng = random.Random(seed)
        n_topics = rng.randint(1, 10)
        docids = [f"d{i:02d}" for i in range(rng.randint(5, 50))]
        run, qrels = [], []
        for t in range(n_topics):
            qid = f"q{t}"
            ranked = rng.sample(docids, rng.randint(1, len(docids)))
            run.extend(_make_run(qid, ranked))
            judged = rng.sample(docids, rng.randint(1, len(docids)))
            qrels.extend(QrelsEntry(qid, d, rng.randint(0, 3)) for d in judged)
        report = evaluate(run, qrels)
        ranked_by_qid = {}
        for e in run:
            ranked_by_qid.setdefault(e.qid, []).append((e.rank, e.docid))
        sums = {"map": 0.0, "p5": 0.0, "p10": 0.0, "ndcg": 0.0}
        evaluated = 0
        for topic in report.topics:
            grades = {e.docid: e.grade for e in qrels if e.qid == topic.qid}
            relevant = {d for d, g in grades.items() if g > 0}
            ranked = [d for _, d in sorted(ranked_by_qid.get(topic.qid, []))]
            assert topic.ap == pytest.approx(oracle_ap(ranked, relevant), rel=1e-9, abs=1e-12)
            assert topic.p5 == pytest.approx(oracle_p_at_k(ranked, relevant, 5), rel=1e-9, abs=1e-12)
            assert topic.p10 == pytest.approx(oracle_p_at_k(ranked, relevant, 10), rel=1e-9, abs=1e-12)
            assert topic.ndcg == pytest.approx(oracle_ndcg(ranked, grades), rel=1e-9, abs=1e-12)
            if relevant:
                evaluated += 1
                for name, value in (("map", topic.ap), ("p5", topic.p5),
                                    ("p10", topic.p10), ("ndcg", topic.ndcg)):
                    sums[name] += value
        for name in sums:
            expected = sums[name] / evaluated if evaluated else 0.0
            assert report.means[name] == pytest.approx(expected, rel=1e-9, abs=1e-12)

    def test_all_metrics_in_unit_interval(self):
        qrels = [QrelsEntry("q1", "a", 3), QrelsEntry("q1", "b", 2), QrelsEntry("q1", "c", 0)]
        run = _make_run("q1", ["c", "b", "a", "x"])
        report = evaluate(run, qrels)
        for t in report.topics:
            for v in (t.ap, t.p5, t.p10, t.ndcg):
                assert 0.0 <= v <= 1.0


def _report(tag, means):
    return EvalReport(run_tag=tag, topics=(), means=means)


class TestReportRendering:
    def test_json_schema(self):
        report = EvalReport(
            run_tag="default_T",
            topics=(TopicMetrics("q1", 0.5, 0.4, 0.2, 0.9),),
            means={"map": 0.5, "p5": 0.4, "p10": 0.2, "ndcg": 0.9},
        )
        obj = report_to_json(report)
        assert obj == {
            "run_tag": "default_T",
            "topics": [{"qid": "q1", "ap": 0.5, "p5": 0.4, "p10": 0.2, "ndcg": 0.9}],
            "means": {"map": 0.5, "p5": 0.4, "p10": 0.2, "ndcg": 0.9},
        }
        assert report_from_json(obj) == report

    def test_render_report_has_mean_row(self):
        report = EvalReport(
            run_tag="default_T",
            topics=(TopicMetrics("q1", 1.0, 0.4, 0.2, 1.0),),
            means={"map": 1.0, "p5": 0.4, "p10": 0.2, "ndcg": 1.0},
        )
        text = render_report(report)
        assert text.startswith("run: default_T\n")
        assert text.rstrip().splitlines()[-1].startswith("mean")

    def test_matrix_requires_all_cells(self):
        reports = [_report("default_T", {"map": 0.1, "p5": 0.1, "p10": 0.1, "ndcg": 0.1})]
        with pytest.raises(DataError, match="default_T\\+C"):
            render_matrix(reports, presets=("default",), schemes=("T", "T+C"))

    def test_matrix_json(self):
        reports = [_report("default_T", {"map": 0.1, "p5": 0.2, "p10": 0.3, "ndcg": 0.4})]
        assert matrix_to_json(reports) == {
            "runs": [
                {
                    "run_tag": "default_T",
                    "preset": "default",
                    "scheme": "T",
                    "map": 0.1,
                    "p5": 0.2,
                    "p10": 0.3,
                    "ndcg": 0.4,
                }
            ]
        }

    def test_matrix_row_order_follows_given_axes(self):
        means = {"map": 0.0, "p5": 0.0, "p10": 0.0, "ndcg": 0.0}
        reports = [
            _report("b_T", means),
            _report("a_T", means),
        ]
        text = render_matrix(reports, presets=("a", "b"), schemes=("T",))
        lines = text.splitlines()
        assert lines[2].startswith("a ") and lines[3].startswith("b ")
