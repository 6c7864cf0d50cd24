"""Three-phase orchestration.

Phase 1 extracts per-document candidates by anchor similarity, phase 2
re-ranks the concatenated candidates on a similarity graph, phase 3 exports
(extractive summary, gold label) records for a downstream generator. An
optional linear length model, fitted on labeled clusters, can replace the
fixed top-N with a word budget.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO, Mapping, Sequence

from .corpus import Cluster, Sentence, cluster_average_length, segment_sentences, tokenize
from .correlation import CorrelationConfig, summarize_cluster_correlation
from .ranking import RankConfig, RankedSentence, build_graph, pagerank, select_top
from .vectorspace import ProviderConfig

__all__ = [
    "PipelineConfig",
    "QuickviewSummary",
    "LengthModel",
    "run_phase1",
    "run_phase2",
    "summarize_cluster",
    "fit_length_model",
    "estimate_target_length",
    "export_finetune_pairs",
    "read_quickviews",
]

MODES = ("correlation", "textrank", "pipeline")


@dataclass(frozen=True)
class LengthModel:
    """Linear summary-length predictor with ratio clamping.

    Predicts summary words from cluster average document words; predictions
    are clamped so the cluster-to-summary length ratio stays inside
    [ratio_min, ratio_max].
    """

    slope: float
    intercept: float
    ratio_min: float = 2.0
    ratio_max: float = 4.0

    def __post_init__(self) -> None:
        if self.ratio_min <= 0 or self.ratio_max <= 0:
            raise ValueError("ratio bounds must be > 0")
        if self.ratio_min > self.ratio_max:
            raise ValueError(
                f"ratio_min {self.ratio_min} exceeds ratio_max {self.ratio_max}"
            )


@dataclass(frozen=True)
class PipelineConfig:
    correlation: CorrelationConfig = field(default_factory=CorrelationConfig)
    rank: RankConfig = field(default_factory=RankConfig)
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    length: LengthModel | None = None  # None = unbounded (fixed top-N)
    phase2_input: str = "phase1_output"
    abbreviations: frozenset[str] | None = None

    def __post_init__(self) -> None:
        if self.phase2_input not in ("phase1_output", "raw_documents"):
            raise ValueError(f"unknown phase2_input {self.phase2_input!r}")


@dataclass(frozen=True)
class QuickviewSummary:
    """Final summary of one cluster plus phase diagnostics.

    For graph-ranked modes, text is the space-joined selected sentences in
    document order. In correlation-only mode selected is empty and text
    equals phase1_text.
    """

    cluster_id: str
    text: str
    selected: tuple[RankedSentence, ...]
    phase1_text: str
    diagnostics: dict


def run_phase1(cluster: Cluster, config: PipelineConfig, provider) -> str:
    return summarize_cluster_correlation(cluster, config.correlation, provider)


def _phase2_candidates(
    cluster: Cluster, phase1_text: str, config: PipelineConfig
) -> list[Sentence]:
    if config.phase2_input == "raw_documents":
        return [s for doc in cluster.documents for s in doc.sentences]
    return segment_sentences(phase1_text, abbreviations=config.abbreviations)


def run_phase2(
    cluster: Cluster, phase1_text: str, config: PipelineConfig, provider
) -> QuickviewSummary:
    """Graph-rank candidate sentences and keep the best.

    Candidates come from re-segmenting the phase-1 text, or directly from
    the documents when phase2_input is raw_documents. Selection keeps the
    top-N by score, unless a length model is set, in which case sentences
    are taken in score order until the estimated word budget is met (always
    at least one).
    """
    candidates = _phase2_candidates(cluster, phase1_text, config)
    if not candidates:
        raise ValueError(f"cluster {cluster.id!r}: no candidate sentences for phase 2")
    refs = [(s.doc_index, s.sent_index) for s in candidates]
    vectors = provider.embed_texts([s.text for s in candidates])
    graph = build_graph(vectors, refs)
    result = pagerank(graph, config.rank)

    diagnostics: dict = {
        "candidates": len(candidates),
        "iterations": result.iterations,
        "converged": result.converged,
        "residual": result.residual,
    }
    if config.length is None:
        selected = select_top(result.scores, refs, config.rank.top_n)
    else:
        target = estimate_target_length(cluster, config.length)
        diagnostics["target_words"] = target
        selected = _select_to_budget(result.scores, candidates, target)

    by_ref = {(s.doc_index, s.sent_index): s for s in candidates}
    text = " ".join(by_ref[r.sentence_ref].text for r in selected)
    return QuickviewSummary(
        cluster_id=cluster.id,
        text=text,
        selected=tuple(selected),
        phase1_text=phase1_text,
        diagnostics=diagnostics,
    )


def _select_to_budget(
    scores: Sequence[float], candidates: Sequence[Sentence], target_words: int
) -> list[RankedSentence]:
    # Same ordering rule as select_top, but the cutoff is a word budget.
    order = sorted(
        range(len(candidates)),
        key=lambda i: (-scores[i], (candidates[i].doc_index, candidates[i].sent_index)),
    )
    chosen: list[RankedSentence] = []
    words = 0
    for rank, i in enumerate(order):
        sentence = candidates[i]
        chosen.append(
            RankedSentence((sentence.doc_index, sentence.sent_index), float(scores[i]), rank)
        )
        words += len(sentence.tokens)
        if words >= target_words:
            break
    chosen.sort(key=lambda r: r.sentence_ref)
    return chosen


def summarize_cluster(
    cluster: Cluster, config: PipelineConfig, provider, mode: str = "pipeline"
) -> QuickviewSummary:
    """One cluster through the requested mode.

    correlation: phase 1 only. textrank: phase 2 straight on the documents.
    pipeline: phase 1 feeding phase 2 (subject to phase2_input).
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    if mode == "correlation":
        text = run_phase1(cluster, config, provider)
        sentence_count = sum(len(d.sentences) for d in cluster.documents)
        return QuickviewSummary(
            cluster_id=cluster.id,
            text=text,
            selected=(),
            phase1_text=text,
            diagnostics={"candidates": sentence_count},
        )
    if mode == "textrank":
        forced = PipelineConfig(
            correlation=config.correlation,
            rank=config.rank,
            provider=config.provider,
            length=config.length,
            phase2_input="raw_documents",
            abbreviations=config.abbreviations,
        )
        return run_phase2(cluster, "", forced, provider)
    phase1_text = run_phase1(cluster, config, provider)
    return run_phase2(cluster, phase1_text, config, provider)


def fit_length_model(
    clusters: Sequence[Cluster], *, ratio_min: float = 2.0, ratio_max: float = 4.0
) -> LengthModel:
    """Least-squares line through (cluster average words, summary words).

    Uses only clusters carrying a gold summary; needs at least two of them
    with distinct average lengths.
    """
    points = [
        (cluster_average_length(c), float(len(tokenize(c.gold_summary))))
        for c in clusters
        if c.gold_summary is not None
    ]
    if len(points) < 2:
        raise ValueError(f"need >= 2 labeled clusters to fit, got {len(points)}")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    n = len(points)
    x_mean = sum(xs) / n
    y_mean = sum(ys) / n
    sxx = sum((x - x_mean) ** 2 for x in xs)
    if sxx == 0:
        raise ValueError("all clusters have the same average length; fit is degenerate")
    sxy = sum((x - x_mean) * (y - y_mean) for x, y in points)
    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    return LengthModel(slope, intercept, ratio_min, ratio_max)


def estimate_target_length(cluster: Cluster, model: LengthModel) -> int:
    """Predicted summary length in words, ratio-clamped, at least 1.

    The raw prediction is clamped into [avg/ratio_max, avg/ratio_min] and
    then rounded to the nearest integer (ties up).
    """
    avg = cluster_average_length(cluster)
    raw = model.slope * avg + model.intercept
    clamped = min(max(raw, avg / model.ratio_max), avg / model.ratio_min)
    return max(1, math.floor(clamped + 0.5))


def read_quickviews(source) -> dict[str, str]:
    """Parse a quickview output file (one {"cluster_id", "summary"} per line).

    Accepts a path or an iterable of lines; returns cluster_id -> summary.
    Duplicate ids and malformed records are errors.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r", encoding="utf-8") as fh:
            return read_quickviews(fh)
    summaries: dict[str, str] = {}
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
        if (
            not isinstance(record, dict)
            or not isinstance(record.get("cluster_id"), str)
            or not isinstance(record.get("summary"), str)
        ):
            raise ValueError(
                f"line {lineno}: expected {{'cluster_id': str, 'summary': str}}"
            )
        if record["cluster_id"] in summaries:
            raise ValueError(f"line {lineno}: duplicate cluster id {record['cluster_id']!r}")
        summaries[record["cluster_id"]] = record["summary"]
    return summaries


def export_finetune_pairs(
    clusters: Sequence[Cluster], quickviews: Mapping[str, str], stream: IO[str]
) -> int:
    """Write (extractive summary, gold label) records as one JSON per line.

    Input order is preserved; clusters without a gold summary are skipped
    and counted. Returns the skip count.
    """
    skipped = 0
    for cluster in clusters:
        if cluster.gold_summary is None:
            skipped += 1
            continue
        if cluster.id not in quickviews:
            raise ValueError(f"no quickview summary for cluster {cluster.id!r}")
        record = {
            "cluster_id": cluster.id,
            "source": quickviews[cluster.id],
            "target": cluster.gold_summary,
        }
        stream.write(json.dumps(record, ensure_ascii=False) + "\n")
    return skipped
