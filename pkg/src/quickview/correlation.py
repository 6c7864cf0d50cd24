"""Single-document extraction by anchor similarity.

Each sentence of a document is scored by cosine similarity against the
document's anchor text; the top M sentences (restored to document order,
normally preceded by the anchor itself) form the document summary, and the
per-document summaries concatenate into the cluster's candidate text.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Cluster, Document, Sentence, tokenize
from .vectorspace import cosine

__all__ = [
    "CorrelationConfig",
    "DocumentSummary",
    "rank_by_anchor",
    "summarize_document",
    "summarize_cluster_correlation",
]


@dataclass(frozen=True)
class CorrelationConfig:
    top_m: int = 3
    include_anchor: bool = True

    def __post_init__(self) -> None:
        if self.top_m < 0:
            raise ValueError(f"top_m must be >= 0, got {self.top_m}")


@dataclass(frozen=True)
class DocumentSummary:
    """Anchor plus selected sentences of one document, in document order.

    anchor_text is empty when the anchor was excluded; scores align with
    selected (each entry is that sentence's anchor similarity).
    """

    doc_id: str
    anchor_text: str
    selected: tuple[Sentence, ...]
    scores: tuple[float, ...]

    @property
    def text(self) -> str:
        parts = []
        if self.anchor_text.strip():
            parts.append(self.anchor_text)
        parts.extend(s.text for s in self.selected)
        return " ".join(parts)


def rank_by_anchor(document: Document, provider) -> list[tuple[Sentence, float]]:
    """Sentences sorted by anchor similarity, best first.

    An anchor with no tokens scores every sentence 0.0 without consulting
    the provider, so ranking degrades to document order regardless of how a
    provider would embed empty text. Ties also keep document order.
    """
    sentences = list(document.sentences)
    if not sentences:
        return []
    if not tokenize(document.anchor_text):
        return [(s, 0.0) for s in sentences]
    vectors = provider.embed_texts([s.text for s in sentences] + [document.anchor_text])
    anchor_vec = vectors[-1]
    pairs = [(s, cosine(v, anchor_vec)) for s, v in zip(sentences, vectors[:-1])]
    pairs.sort(key=lambda p: -p[1])  # stable: equal scores keep document order
    return pairs


def summarize_document(
    document: Document, config: CorrelationConfig, provider
) -> DocumentSummary:
    ranked = rank_by_anchor(document, provider)
    kept = ranked[: config.top_m]
    kept.sort(key=lambda p: p[0].sent_index)
    return DocumentSummary(
        doc_id=document.id,
        anchor_text=document.anchor_text if config.include_anchor else "",
        selected=tuple(s for s, _ in kept),
        scores=tuple(score for _, score in kept),
    )


def summarize_cluster_correlation(
    cluster: Cluster, config: CorrelationConfig, provider
) -> str:
    """Concatenated per-document summaries, cluster document order."""
    segments = [
        summarize_document(doc, config, provider).text for doc in cluster.documents
    ]
    return " ".join(segment for segment in segments if segment)
