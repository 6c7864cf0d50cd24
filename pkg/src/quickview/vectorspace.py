"""Sentence vectors and cosine similarity.

The self-contained vector source is a TF-IDF model fitted per cluster; an
external embedding service can stand in through the provider protocol (see
:mod:`quickview.provider`). Both produce :class:`SentenceVector` values that
feed the anchor-correlation ranking and the similarity graph.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .corpus import tokenize

__all__ = [
    "SentenceVector",
    "TfidfModel",
    "ProviderConfig",
    "fit_tfidf",
    "embed",
    "cosine",
]


@dataclass(frozen=True, eq=False)
class SentenceVector:
    """A fixed-dimension real vector with its Euclidean norm cached."""

    values: np.ndarray
    norm: float = field(init=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("vector must be one-dimensional with dimension >= 1")
        if not np.all(np.isfinite(values)):
            raise ValueError("vector entries must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "norm", float(np.linalg.norm(values)))

    @property
    def dim(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class TfidfModel:
    """Vocabulary, smoothed idf weights and the fitted unit count.

    idf(t) = ln((1 + doc_count) / (1 + df(t))) + 1, so no token weighs zero.
    Vocabulary indices follow first appearance in the fitting corpus, which
    makes fitting fully deterministic.
    """

    vocabulary: dict[str, int]
    idf: np.ndarray
    doc_count: int

    @property
    def dim(self) -> int:
        return len(self.vocabulary)


@dataclass(frozen=True)
class ProviderConfig:
    """Which vector source to use: built-in TF-IDF or an external service."""

    kind: str = "tfidf"
    endpoint: str | None = None
    timeout_ms: int = 10000

    def __post_init__(self) -> None:
        if self.kind not in ("tfidf", "external"):
            raise ValueError(f"provider kind must be 'tfidf' or 'external', got {self.kind!r}")
        if self.kind == "external" and not self.endpoint:
            raise ValueError("external provider requires an endpoint")
        if self.kind == "tfidf" and self.endpoint:
            raise ValueError("tfidf provider takes no endpoint")
        if self.timeout_ms <= 0:
            raise ValueError(f"timeout_ms must be positive, got {self.timeout_ms}")


def fit_tfidf(units: Sequence[Iterable[str]]) -> TfidfModel:
    """Fit a TF-IDF model treating each token list as one document.

    Vocabulary order is first appearance. Raises if there is nothing to fit.
    """
    units = [list(u) for u in units]
    if not units:
        raise ValueError("fit_tfidf requires at least one unit")
    if all(not u for u in units):
        raise ValueError("fit_tfidf requires at least one non-empty unit")

    vocabulary: dict[str, int] = {}
    df: Counter[str] = Counter()
    for unit in units:
        for tok in unit:
            if tok not in vocabulary:
                vocabulary[tok] = len(vocabulary)
        df.update(set(unit))

    n = len(units)
    idf = np.empty(len(vocabulary))
    for tok, dim in vocabulary.items():
        idf[dim] = math.log((1 + n) / (1 + df[tok])) + 1
    idf.setflags(write=False)
    return TfidfModel(vocabulary=vocabulary, idf=idf, doc_count=n)


def _tfidf_vector(model: TfidfModel, tokens: Iterable[str]) -> SentenceVector:
    values = np.zeros(model.dim)
    for tok, count in Counter(tokens).items():
        dim = model.vocabulary.get(tok)
        if dim is not None:  # out-of-vocabulary tokens contribute nothing
            values[dim] = count * model.idf[dim]
    return SentenceVector(values)


def embed(source, texts: Sequence) -> list[SentenceVector]:
    """Embed each text, in order, through a TF-IDF model or a provider.

    With a :class:`TfidfModel`, each text may be a token list or a raw string
    (tokenized first); vectors are raw term counts times idf. Any other
    source must expose ``embed_texts(list[str])`` and is handed raw strings.
    """
    if isinstance(source, TfidfModel):
        units = [tokenize(t) if isinstance(t, str) else list(t) for t in texts]
        return [_tfidf_vector(source, u) for u in units]
    return source.embed_texts([str(t) for t in texts])


def cosine(a: SentenceVector, b: SentenceVector) -> float:
    """Cosine similarity in [-1, 1]; zero-norm vectors compare as 0."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.norm == 0.0 or b.norm == 0.0:
        return 0.0
    value = float(np.dot(a.values, b.values)) / (a.norm * b.norm)
    return min(1.0, max(-1.0, value))
