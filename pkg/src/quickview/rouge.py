"""ROUGE-2 scoring: clipped bigram overlap with macro-averaged aggregation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .corpus import ngrams, tokenize

__all__ = ["RougeScore", "rouge2", "evaluate_corpus"]


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


def rouge2(candidate: str, reference: str) -> RougeScore:
    """Bigram precision/recall/F1 of candidate against reference.

    Matching is clipped multiset intersection: a bigram counts at most as
    often as it appears in the other text. Either text having fewer than two
    tokens zeroes the corresponding component rather than erroring.
    """
    cand_bigrams = ngrams(tokenize(candidate), 2)
    ref_bigrams = ngrams(tokenize(reference), 2)
    matched = sum((cand_bigrams & ref_bigrams).values())
    cand_total = sum(cand_bigrams.values())
    ref_total = sum(ref_bigrams.values())
    precision = matched / cand_total if cand_total else 0.0
    recall = matched / ref_total if ref_total else 0.0
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1 = 0.0
    return RougeScore(precision, recall, f1)


def evaluate_corpus(
    pairs: Sequence[tuple[str, str]],
) -> tuple[RougeScore, list[RougeScore]]:
    """Macro average over (candidate, reference) pairs.

    Each component is the plain mean of the per-pair values; in particular
    F1 is averaged directly, not recomputed from the averaged P and R.
    Returns (aggregate, per-pair scores).
    """
    if not pairs:
        raise ValueError("cannot evaluate an empty pair list")
    per_pair = [rouge2(candidate, reference) for candidate, reference in pairs]
    n = len(per_pair)
    aggregate = RougeScore(
        precision=sum(s.precision for s in per_pair) / n,
        recall=sum(s.recall for s in per_pair) / n,
        f1=sum(s.f1 for s in per_pair) / n,
    )
    return aggregate, per_pair
