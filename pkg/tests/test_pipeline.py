import io
import json
import math
import random

import pytest

from oracles import brute_cosine, ols_line, reference_pagerank, topk_by_score
from quickview.corpus import Cluster, Document, segment_sentences, tokenize
from quickview.correlation import CorrelationConfig
from quickview.pipeline import (
    LengthModel,
    PipelineConfig,
    QuickviewSummary,
    estimate_target_length,
    export_finetune_pairs,
    fit_length_model,
    read_quickviews,
    run_phase1,
    run_phase2,
    summarize_cluster,
)
from quickview.provider import TfidfBackend
from quickview.ranking import RankConfig
from quickview.correlation import summarize_cluster_correlation


def make_doc(doc_id: str, body: str, anchor: str = "", doc_index: int = 0) -> Document:
    return Document(
        id=doc_id,
        title="",
        anchor_text=anchor,
        body=body,
        sentences=tuple(segment_sentences(body, doc_index=doc_index)),
    )


def exact_words_cluster(cluster_id: str, doc_words: list[int], summary_words: int | None = None) -> Cluster:
    docs = tuple(
        Document(id=f"{cluster_id}-d{i}", title="", anchor_text="",
                 body=" ".join(["từ"] * n) + ".")
        for i, n in enumerate(doc_words)
    )
    # trailing period sticks to the last token, so word count stays exact
    summary = " ".join(["chữ"] * summary_words) if summary_words is not None else None
    return Cluster(id=cluster_id, documents=docs, gold_summary=summary)


def provider_for(cluster: Cluster):
    return TfidfBackend().provider_for(cluster)


# --- config types ---------------------------------------------------------------


def test_length_model_validation():
    with pytest.raises(ValueError):
        LengthModel(1.0, 0.0, ratio_min=0.0)
    with pytest.raises(ValueError):
        LengthModel(1.0, 0.0, ratio_min=5.0, ratio_max=4.0)
    assert LengthModel(1.0, 0.0).ratio_min == 2.0


def test_pipeline_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(phase2_input="sideways")
    assert PipelineConfig().phase2_input == "phase1_output"


# --- fit_length_model -------------------------------------------------------------


def test_fit_exact_line_through_two_points():
    clusters = [
        exact_words_cluster("a", [100], summary_words=50),
        exact_words_cluster("b", [200], summary_words=100),
    ]
    model = fit_length_model(clusters)
    assert model.slope == pytest.approx(0.5, abs=1e-12)
    assert model.intercept == pytest.approx(0.0, abs=1e-9)


def test_fit_noiseless_line_recovers_coefficients():
    # y = 0.5 x + 10 with even x, so every y is an integer word count
    xs = [20, 40, 60, 120, 260]
    clusters = [
        exact_words_cluster(f"c{x}", [x], summary_words=int(0.5 * x + 10)) for x in xs
    ]
    model = fit_length_model(clusters)
    assert model.slope == pytest.approx(0.5, abs=1e-9)
    assert model.intercept == pytest.approx(10.0, abs=1e-9)


def test_fit_noisy_line_matches_polyfit_oracle():
    rng = random.Random(14)
    xs, ys = [], []
    clusters = []
    for i in range(50):
        x = rng.randint(50, 500)
        y = max(1, int(0.4 * x + 10 + rng.uniform(-1, 1)))
        xs.append(float(x))
        ys.append(float(y))
        clusters.append(exact_words_cluster(f"c{i}", [x], summary_words=y))
    model = fit_length_model(clusters)
    slope, intercept = ols_line(xs, ys)
    assert model.slope == pytest.approx(slope, abs=1e-9)
    assert model.intercept == pytest.approx(intercept, abs=1e-9)
    assert abs(model.slope - 0.4) < 0.05


def test_fit_requires_two_labeled_and_distinct_x():
    with pytest.raises(ValueError, match=">= 2"):
        fit_length_model([exact_words_cluster("a", [100], summary_words=50)])
    same_x = [
        exact_words_cluster("a", [100], summary_words=50),
        exact_words_cluster("b", [100], summary_words=60),
    ]
    with pytest.raises(ValueError, match="degenerate"):
        fit_length_model(same_x)
    unlabeled = [exact_words_cluster("a", [100]), exact_words_cluster("b", [200])]
    with pytest.raises(ValueError, match=">= 2"):
        fit_length_model(unlabeled)


# --- estimate_target_length ---------------------------------------------------------


def test_estimate_clamps_up_to_ratio_floor():
    cluster = exact_words_cluster("c", [400])
    assert estimate_target_length(cluster, LengthModel(0.0, 60.0)) == 100  # 400/4


def test_estimate_inside_band_passes_through():
    cluster = exact_words_cluster("c", [400])
    assert estimate_target_length(cluster, LengthModel(0.0, 150.0)) == 150


def test_estimate_arithmetic_example():
    cluster = exact_words_cluster("c", [300])
    # raw = 0.4 * 300 + 10 = 130, inside [75, 150]
    assert estimate_target_length(cluster, LengthModel(0.4, 10.0)) == 130


def test_estimate_clamps_down_to_ratio_ceiling():
    cluster = exact_words_cluster("c", [400])
    assert estimate_target_length(cluster, LengthModel(1.0, 0.0)) == 200  # 400/2


def test_estimate_never_below_one():
    cluster = exact_words_cluster("c", [1])
    assert estimate_target_length(cluster, LengthModel(0.0, 0.0)) == 1


def test_estimate_matches_independent_arithmetic():
    rng = random.Random(3)
    for _ in range(200):
        words = rng.randint(1, 800)
        cluster = exact_words_cluster("c", [words])
        model = LengthModel(rng.uniform(0, 1.5), rng.uniform(-20, 60))
        got = estimate_target_length(cluster, model)
        raw = model.slope * words + model.intercept
        clamped = min(max(raw, words / 4.0), words / 2.0)
        assert words / 4.0 <= clamped <= words / 2.0
        assert got == max(1, math.floor(clamped + 0.5))


# --- run_phase1 / run_phase2 ----------------------------------------------------------


def storm_cluster() -> Cluster:
    docs = (
        make_doc(
            "d0",
            "Bão số năm đổ bộ miền trung. Gió giật mạnh suốt đêm qua. "
            "Người dân sơ tán khỏi vùng thấp. Chính quyền phát lương thực dự trữ.",
            anchor="Bão số năm đổ bộ, người dân sơ tán.",
            doc_index=0,
        ),
        make_doc(
            "d1",
            "Mưa lớn gây ngập nhiều tuyến phố. Giao thông tê liệt vào sáng nay. "
            "Trường học cho học sinh nghỉ. Điện lực cắt điện đề phòng.",
            anchor="Mưa ngập khiến giao thông tê liệt.",
            doc_index=1,
        ),
        make_doc(
            "d2",
            "Các đội cứu hộ làm việc xuyên đêm. Nhiều tàu thuyền được neo đậu an toàn. "
            "Thiệt hại ban đầu ước tính lớn.",
            anchor="Cứu hộ xuyên đêm, thiệt hại lớn.",
            doc_index=2,
        ),
    )
    return Cluster(id="storm", documents=docs)


def test_run_phase1_delegates_to_correlation():
    cluster = storm_cluster()
    provider = provider_for(cluster)
    config = PipelineConfig()
    assert run_phase1(cluster, config, provider) == summarize_cluster_correlation(
        cluster, config.correlation, provider
    )


def test_phase2_single_sentence_is_the_summary():
    cluster = make_single = Cluster(
        id="one", documents=(make_doc("d", "Chỉ có một câu duy nhất."),)
    )
    provider = provider_for(cluster)
    result = run_phase2(cluster, "Chỉ có một câu duy nhất.", PipelineConfig(), provider)
    assert result.text == "Chỉ có một câu duy nhất."
    assert len(result.selected) == 1
    assert result.diagnostics["candidates"] == 1


def test_phase2_identical_sentences_all_selected_equal_scores():
    sentence = "Câu lặp lại nguyên văn."
    phase1 = " ".join([sentence] * 5)
    cluster = Cluster(id="rep", documents=(make_doc("d", phase1),))
    provider = provider_for(cluster)
    result = run_phase2(cluster, phase1, PipelineConfig(), provider)
    assert len(result.selected) == 5
    scores = [r.score for r in result.selected]
    assert max(scores) - min(scores) <= 1e-9
    assert result.text == phase1


def test_phase2_zero_candidates_is_error():
    cluster = storm_cluster()
    provider = provider_for(cluster)
    with pytest.raises(ValueError, match="no candidate sentences"):
        run_phase2(cluster, "", PipelineConfig(), provider)


def test_phase2_selection_matches_composed_oracle():
    cluster = storm_cluster()
    provider = provider_for(cluster)
    config = PipelineConfig()
    phase1 = run_phase1(cluster, config, provider)
    result = run_phase2(cluster, phase1, config, provider)

    # independent composition: segment, embed, hand graph, reference pagerank,
    # extraction-oracle top-5, positional render
    sentences = segment_sentences(phase1)
    vectors = provider.embed_texts([s.text for s in sentences])
    n = len(sentences)
    weights = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                weights[i][j] = max(0.0, brute_cosine(vectors[i].values, vectors[j].values))
    scores, _, converged = reference_pagerank(weights, 0.85, tolerance=1e-6)
    assert converged
    picked = topk_by_score(scores, [(s.doc_index, s.sent_index) for s in sentences], 5)
    expected_order = sorted(picked)
    assert [r.sentence_ref for r in result.selected] == [
        (sentences[i].doc_index, sentences[i].sent_index) for i in expected_order
    ]
    assert result.text == " ".join(sentences[i].text for i in expected_order)


def test_phase2_raw_documents_ignores_phase1_text():
    cluster = storm_cluster()
    provider = provider_for(cluster)
    config = PipelineConfig(phase2_input="raw_documents")
    one = run_phase2(cluster, "Văn bản này sẽ bị bỏ qua.", config, provider)
    two = run_phase2(cluster, "", config, provider)
    assert one.text == two.text
    assert one.selected == two.selected
    # refs point into the original documents in raw mode
    assert all(ref.sentence_ref[0] in (0, 1, 2) for ref in one.selected)


def test_phase2_length_budget_overrides_top_n():
    cluster = storm_cluster()
    provider = provider_for(cluster)
    avg = sum(len(tokenize(d.body)) for d in cluster.documents) / 3
    model = LengthModel(0.0, avg / 3.0)  # raw inside [avg/4, avg/2]
    target = estimate_target_length(cluster, model)
    config = PipelineConfig(length=model, phase2_input="raw_documents")
    result = run_phase2(cluster, "", config, provider)
    assert result.diagnostics["target_words"] == target

    words = [len(s.tokens) for r in result.selected
             for s in [_sentence_by_ref(cluster, r.sentence_ref)]]
    total = sum(words)
    assert total >= target or len(result.selected) == _total_sentences(cluster)
    # dropping the worst-ranked selected sentence dips below the budget
    if len(result.selected) > 1:
        worst = max(result.selected, key=lambda r: r.rank)
        assert total - len(_sentence_by_ref(cluster, worst.sentence_ref).tokens) < target


def test_phase2_length_budget_keeps_at_least_one():
    cluster = Cluster(id="one", documents=(make_doc("d", "Một câu khá dài ở đây."),))
    provider = provider_for(cluster)
    config = PipelineConfig(
        length=LengthModel(0.0, 0.0), phase2_input="raw_documents"
    )
    result = run_phase2(cluster, "", config, provider)
    assert len(result.selected) == 1


def _sentence_by_ref(cluster: Cluster, ref: tuple[int, int]):
    doc_index, sent_index = ref
    return cluster.documents[doc_index].sentences[sent_index]


def _total_sentences(cluster: Cluster) -> int:
    return sum(len(d.sentences) for d in cluster.documents)


# --- summarize_cluster ---------------------------------------------------------------


def test_summarize_cluster_modes():
    cluster = storm_cluster()
    provider = provider_for(cluster)
    config = PipelineConfig()

    correlation = summarize_cluster(cluster, config, provider, mode="correlation")
    assert correlation.text == run_phase1(cluster, config, provider)
    assert correlation.selected == ()
    assert correlation.phase1_text == correlation.text

    textrank = summarize_cluster(cluster, config, provider, mode="textrank")
    raw_config = PipelineConfig(phase2_input="raw_documents")
    assert textrank.text == run_phase2(cluster, "", raw_config, provider).text

    pipeline = summarize_cluster(cluster, config, provider, mode="pipeline")
    assert pipeline.phase1_text == correlation.text
    assert isinstance(pipeline, QuickviewSummary)
    assert pipeline.diagnostics["iterations"] >= 1

    with pytest.raises(ValueError, match="unknown mode"):
        summarize_cluster(cluster, config, provider, mode="hybrid")


def test_quickview_text_is_positional_join(synthetic_clusters):
    cluster = synthetic_clusters[0]
    provider = provider_for(cluster)
    result = summarize_cluster(cluster, PipelineConfig(), provider, mode="pipeline")
    refs = [r.sentence_ref for r in result.selected]
    assert refs == sorted(refs)
    assert result.text.count(" ") >= len(refs) - 1


# --- export / read ---------------------------------------------------------------------


def test_export_single_labeled_cluster():
    cluster = exact_words_cluster("c1", [30], summary_words=10)
    stream = io.StringIO()
    skipped = export_finetune_pairs([cluster], {"c1": "tóm tắt trích xuất"}, stream)
    assert skipped == 0
    record = json.loads(stream.getvalue())
    assert record == {
        "cluster_id": "c1",
        "source": "tóm tắt trích xuất",
        "target": cluster.gold_summary,
    }


def test_export_skips_unlabeled_with_count():
    labeled = exact_words_cluster("a", [30], summary_words=10)
    unlabeled = exact_words_cluster("b", [30])
    stream = io.StringIO()
    skipped = export_finetune_pairs([unlabeled, labeled], {"a": "x", "b": "y"}, stream)
    assert skipped == 1
    lines = stream.getvalue().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["cluster_id"] == "a"


def test_export_missing_quickview_is_error():
    cluster = exact_words_cluster("c1", [30], summary_words=10)
    with pytest.raises(ValueError, match="no quickview"):
        export_finetune_pairs([cluster], {}, io.StringIO())


def test_export_round_trip_field_identical(synthetic_clusters):
    quickviews = {c.id: f"tóm tắt cho {c.id}" for c in synthetic_clusters}
    stream = io.StringIO()
    skipped = export_finetune_pairs(synthetic_clusters, quickviews, stream)
    assert skipped == 2  # the bundled dataset has two unlabeled clusters
    records = [json.loads(line) for line in stream.getvalue().splitlines()]
    labeled = [c for c in synthetic_clusters if c.gold_summary is not None]
    assert [r["cluster_id"] for r in records] == [c.id for c in labeled]
    for record, cluster in zip(records, labeled):
        assert record["source"] == quickviews[cluster.id]
        assert record["target"] == cluster.gold_summary
        assert set(record) == {"cluster_id", "source", "target"}


def test_read_quickviews_round_trip(tmp_path):
    path = tmp_path / "out.jsonl"
    path.write_text(
        '{"cluster_id": "a", "summary": "xin chào"}\n'
        '{"cluster_id": "b", "summary": ""}\n',
        encoding="utf-8",
    )
    assert read_quickviews(path) == {"a": "xin chào", "b": ""}


def test_read_quickviews_rejects_duplicates_and_malformed():
    with pytest.raises(ValueError, match="duplicate"):
        read_quickviews(io.StringIO(
            '{"cluster_id": "a", "summary": "x"}\n{"cluster_id": "a", "summary": "y"}\n'
        ))
    with pytest.raises(ValueError, match="line 1"):
        read_quickviews(io.StringIO("not json\n"))
    with pytest.raises(ValueError, match="cluster_id"):
        read_quickviews(io.StringIO('{"summary": "x"}\n'))
