import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_rouge2
from quickview.rouge import RougeScore, evaluate_corpus, rouge2

WORDS = ["bão", "lũ", "mưa", "nắng", "đường", "cầu", "chợ", "gạo", "xe", "sông"]
texts = st.lists(st.sampled_from(WORDS), max_size=12).map(" ".join)


def test_identical_texts_score_one():
    text = "cơn bão đổ bộ vào miền trung đêm qua"
    assert rouge2(text, text) == RougeScore(1.0, 1.0, 1.0)


def test_disjoint_vocabularies_score_zero():
    assert rouge2("một hai ba bốn", "năm sáu bảy tám") == RougeScore(0.0, 0.0, 0.0)


def test_two_thirds_worked_example():
    got = rouge2("a b c d", "a b c e")
    assert got.precision == 2 / 3
    assert got.recall == 2 / 3
    assert got.f1 == pytest.approx(2 / 3, abs=1e-15)


def test_short_texts_zero_without_error():
    assert rouge2("", "").f1 == 0.0
    assert rouge2("một", "một").f1 == 0.0  # no bigram in either text
    assert rouge2("một hai", "").precision == 0.0


def test_tokenization_is_case_and_punctuation_insensitive():
    assert rouge2("Hà Nội!", "hà nội").f1 == 1.0


def test_clipping_caps_repeated_bigrams():
    # candidate repeats the only matching bigram three times
    got = rouge2("a b a b a b", "a b c")
    # candidate bigrams: ab,ba,ab,ba,ab (5); reference has one ab
    assert got.precision == pytest.approx(1 / 5)
    assert got.recall == pytest.approx(1 / 2)


@given(texts, texts)
def test_symmetry_swap(a, b):
    assert rouge2(a, b).precision == rouge2(b, a).recall
    assert rouge2(a, b).recall == rouge2(b, a).precision


@given(texts, texts)
def test_bounds_and_f1_inequality(a, b):
    score = rouge2(a, b)
    for value in (score.precision, score.recall, score.f1):
        assert 0.0 <= value <= 1.0
    assert score.f1 <= max(score.precision, score.recall) + 1e-15


@given(texts)
def test_self_score_is_one_with_two_tokens(text):
    if len(text.split()) >= 2:
        assert rouge2(text, text).f1 == 1.0


@given(texts, texts)
def test_matches_brute_oracle(a, b):
    got = rouge2(a, b)
    p, r, f1 = brute_rouge2(a.split(), b.split())
    assert got.precision == pytest.approx(p, abs=1e-12)
    assert got.recall == pytest.approx(r, abs=1e-12)
    assert got.f1 == pytest.approx(f1, abs=1e-12)


def test_evaluate_single_pair_equals_rouge2():
    pair = ("bão về trong đêm", "bão về lúc nửa đêm")
    aggregate, per_pair = evaluate_corpus([pair])
    assert aggregate == rouge2(*pair)
    assert per_pair == [rouge2(*pair)]


def test_evaluate_macro_average_of_one_and_zero():
    pairs = [("a b c", "a b c"), ("x y z", "q w e")]
    aggregate, _ = evaluate_corpus(pairs)
    assert aggregate.f1 == 0.5
    assert aggregate.precision == 0.5
    assert aggregate.recall == 0.5


def test_evaluate_ten_synthetic_pairs_match_oracle():
    rng = random.Random(2022)
    pairs = []
    for _ in range(10):
        cand = " ".join(rng.choices(WORDS, k=rng.randint(0, 15)))
        ref = " ".join(rng.choices(WORDS, k=rng.randint(0, 15)))
        pairs.append((cand, ref))
    aggregate, per_pair = evaluate_corpus(pairs)
    briefs = [brute_rouge2(c.split(), r.split()) for c, r in pairs]
    n = len(briefs)
    assert aggregate.precision == pytest.approx(sum(b[0] for b in briefs) / n, abs=1e-9)
    assert aggregate.recall == pytest.approx(sum(b[1] for b in briefs) / n, abs=1e-9)
    assert aggregate.f1 == pytest.approx(sum(b[2] for b in briefs) / n, abs=1e-9)
    # macro averages F1 directly: it differs from F1 of the averaged P/R
    assert len(per_pair) == 10


def test_evaluate_empty_is_error():
    with pytest.raises(ValueError):
        evaluate_corpus([])
