"""Extractive multi-document summarization with ROUGE-2 evaluation.

The pipeline runs in three phases: per-document sentence ranking against
anchor texts, graph-based re-ranking of the pooled candidates, and export
of (extractive summary, gold label) pairs for downstream fine-tuning.
"""

from .corpus import (
    Cluster,
    CorpusStats,
    DatasetError,
    Document,
    Sentence,
    cluster_average_length,
    corpus_stats,
    load_clusters,
    ngrams,
    segment_sentences,
    tokenize,
)
from .correlation import (
    CorrelationConfig,
    DocumentSummary,
    rank_by_anchor,
    summarize_cluster_correlation,
    summarize_document,
)
from .pipeline import (
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
from .provider import (
    ExternalBackend,
    ExternalEmbeddingClient,
    ProviderError,
    TfidfBackend,
    TfidfProvider,
    cluster_units,
    open_backend,
)
from .ranking import (
    PageRankResult,
    RankConfig,
    RankedSentence,
    SimilarityGraph,
    build_graph,
    pagerank,
    select_top,
)
from .rouge import RougeScore, evaluate_corpus, rouge2
from .vectorspace import (
    ProviderConfig,
    SentenceVector,
    TfidfModel,
    cosine,
    embed,
    fit_tfidf,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # corpus
    "Cluster",
    "CorpusStats",
    "DatasetError",
    "Document",
    "Sentence",
    "cluster_average_length",
    "corpus_stats",
    "load_clusters",
    "ngrams",
    "segment_sentences",
    "tokenize",
    # vector space
    "ProviderConfig",
    "SentenceVector",
    "TfidfModel",
    "cosine",
    "embed",
    "fit_tfidf",
    # providers
    "ExternalBackend",
    "ExternalEmbeddingClient",
    "ProviderError",
    "TfidfBackend",
    "TfidfProvider",
    "cluster_units",
    "open_backend",
    # ranking
    "PageRankResult",
    "RankConfig",
    "RankedSentence",
    "SimilarityGraph",
    "build_graph",
    "pagerank",
    "select_top",
    # correlation
    "CorrelationConfig",
    "DocumentSummary",
    "rank_by_anchor",
    "summarize_cluster_correlation",
    "summarize_document",
    # pipeline
    "LengthModel",
    "PipelineConfig",
    "QuickviewSummary",
    "estimate_target_length",
    "export_finetune_pairs",
    "fit_length_model",
    "read_quickviews",
    "run_phase1",
    "run_phase2",
    "summarize_cluster",
    # evaluation
    "RougeScore",
    "evaluate_corpus",
    "rouge2",
]
