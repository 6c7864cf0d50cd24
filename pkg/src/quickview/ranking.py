"""Graph-based sentence ranking.

Sentences become vertices of an undirected graph whose edge weights are
cosine similarities, and a weighted PageRank-style iteration scores them:

    S(Vi) = (1 - d) + d * sum_j ( w_ji / sum_k w_jk ) * S(Vj)

summed over neighbors j with positive total weight. Updates are synchronous
(Jacobi style) from an all-ones start, so results do not depend on vertex
order. Scores scale with graph size rather than summing to 1; only the
ordering matters for selection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .vectorspace import SentenceVector, cosine

__all__ = [
    "SimilarityGraph",
    "RankConfig",
    "RankedSentence",
    "PageRankResult",
    "build_graph",
    "pagerank",
    "select_top",
]

SentenceRef = tuple[int, int]


@dataclass(frozen=True, eq=False)
class SimilarityGraph:
    """Symmetric non-negative weight matrix over sentence vertices.

    Weights are not required to be <= 1: ranking is invariant under uniform
    scaling of the weights, and callers exploit that.
    """

    weights: np.ndarray
    sentence_refs: tuple[SentenceRef, ...]

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=float)
        if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
            raise ValueError(f"weights must be square, got shape {weights.shape}")
        if weights.shape[0] < 1:
            raise ValueError("graph needs at least one vertex")
        if not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite")
        if np.any(weights < 0):
            raise ValueError("weights must be non-negative")
        if np.any(np.diagonal(weights) != 0):
            raise ValueError("diagonal must be zero")
        if not np.array_equal(weights, weights.T):
            raise ValueError("weights must be exactly symmetric")
        refs = tuple(self.sentence_refs)
        if len(refs) != weights.shape[0]:
            raise ValueError(
                f"{len(refs)} sentence refs for {weights.shape[0]} vertices"
            )
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "sentence_refs", refs)

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class RankConfig:
    damping: float = 0.85
    tolerance: float = 1e-6
    max_iterations: int = 100
    top_n: int = 5

    def __post_init__(self) -> None:
        if not 0.0 <= self.damping < 1.0:
            raise ValueError(f"damping must be in [0, 1), got {self.damping}")
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.top_n < 1:
            raise ValueError(f"top_n must be >= 1, got {self.top_n}")


@dataclass(frozen=True)
class RankedSentence:
    """A selected sentence: where it lives, its score, and its score-order rank."""

    sentence_ref: SentenceRef
    score: float
    rank: int


@dataclass(frozen=True)
class PageRankResult:
    scores: tuple[float, ...]
    iterations: int
    converged: bool
    residual: float


def build_graph(
    vectors: Sequence[SentenceVector], refs: Sequence[SentenceRef]
) -> SimilarityGraph:
    """Pairwise-cosine graph; negative similarities floor to 0."""
    if len(vectors) != len(refs):
        raise ValueError(f"{len(vectors)} vectors but {len(refs)} refs")
    if not vectors:
        raise ValueError("need at least one vector")
    n = len(vectors)
    weights = np.zeros((n, n), dtype=float)
    for i in range(n):
        for j in range(i + 1, n):
            w = max(0.0, cosine(vectors[i], vectors[j]))
            weights[i, j] = w
            weights[j, i] = w
    return SimilarityGraph(weights, tuple(refs))


def pagerank(graph: SimilarityGraph, config: RankConfig | None = None) -> PageRankResult:
    """Iterate the weighted recurrence to a fixed point.

    Stops when the largest absolute score change drops below the tolerance,
    or at max_iterations with ``converged = False`` (a diagnostic, not an
    error). Vertices with no positive-weight edge keep score (1 - d).
    """
    if config is None:
        config = RankConfig()
    d = config.damping
    weights = graph.weights
    out_strength = weights.sum(axis=1)
    # Row-normalized transition contributions; all-zero rows contribute nothing.
    safe = np.where(out_strength > 0, out_strength, 1.0)
    transition = (weights / safe[:, None]).T

    scores = np.ones(graph.n, dtype=float)
    iterations = 0
    residual = float("inf")
    for iterations in range(1, config.max_iterations + 1):
        updated = (1.0 - d) + d * (transition @ scores)
        residual = float(np.max(np.abs(updated - scores)))
        scores = updated
        if residual < config.tolerance:
            return PageRankResult(tuple(scores), iterations, True, residual)
    return PageRankResult(tuple(scores), iterations, False, residual)


def select_top(
    scores: Sequence[float], refs: Sequence[SentenceRef], top_n: int
) -> list[RankedSentence]:
    """Keep the min(top_n, n) best-scored sentences, emitted in document order.

    Ties break toward the lexicographically smaller ref, so equal-scored
    earlier sentences win. The rank field records score order (0 = best).
    """
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    if len(scores) != len(refs):
        raise ValueError(f"{len(scores)} scores but {len(refs)} refs")
    by_score = sorted(range(len(scores)), key=lambda i: (-scores[i], refs[i]))
    chosen = [
        RankedSentence(refs[i], float(scores[i]), rank)
        for rank, i in enumerate(by_score[:top_n])
    ]
    chosen.sort(key=lambda r: r.sentence_ref)
    return chosen
