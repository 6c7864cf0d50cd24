"""
Scoring summaries with ROUGE-2 and exporting fine-tuning pairs
==============================================================

"""

import io
import json
from pathlib import Path

from quickview import (
    PipelineConfig,
    TfidfBackend,
    evaluate_corpus,
    export_finetune_pairs,
    load_clusters,
    ngrams,
    rouge2,
    summarize_cluster,
    tokenize,
)

# ROUGE-2 counts overlapping bigrams. Worked example by hand first:
candidate = "mưa lớn gây ngập"
reference = "mưa lớn gây thiệt hại nặng"
print(f"candidate bigrams: {ngrams(tokenize(candidate), 2)}")
print(f"reference bigrams: {ngrams(tokenize(reference), 2)}")

# Two of the candidate's three bigrams appear in the reference, so
# precision is 2/3; the reference has five bigrams, so recall is 2/5.
score = rouge2(candidate, reference)
print(f"P={score.precision:.4f} R={score.recall:.4f} F1={score.f1:.4f}")
assert score.precision == 2 / 3
assert score.recall == 2 / 5

# Identical texts score 1 across the board, disjoint texts score 0, and
# matching is case-insensitive with punctuation stripped at token edges.
assert rouge2("a b c", "a b c").f1 == 1.0
assert rouge2("a b c", "x y z").f1 == 0.0
assert rouge2("Hà Nội!", "hà nội").f1 == 1.0

# Now the real thing: summarize the bundled dataset and score the labeled
# clusters against their gold summaries, macro-averaging the per-cluster
# scores (mean of F1 values, not a pooled count).
DATASET = Path(__file__).resolve().parents[1] / "tests" / "data" / "synthetic.jsonl"
clusters = load_clusters(DATASET)
backend = TfidfBackend()
config = PipelineConfig()

summaries = {
    cluster.id: summarize_cluster(
        cluster, config, backend.provider_for(cluster), mode="pipeline"
    ).text
    for cluster in clusters
}

labeled = [c for c in clusters if c.gold_summary is not None]
pairs = [(summaries[c.id], c.gold_summary) for c in labeled]
aggregate, per_cluster = evaluate_corpus(pairs)

print(f"\n{'cluster':14s} {'R2-F1':>7s} {'R2-P':>7s} {'R2-R':>7s}")
for cluster, s in zip(labeled, per_cluster):
    print(f"{cluster.id:14s} {s.f1:7.4f} {s.precision:7.4f} {s.recall:7.4f}")
print(f"{'ALL':14s} {aggregate.f1:7.4f} {aggregate.precision:7.4f} {aggregate.recall:7.4f}")

# The (extractive summary, gold label) pairs feed a downstream generative
# model; unlabeled clusters are skipped and counted.
stream = io.StringIO()
skipped = export_finetune_pairs(clusters, summaries, stream)
records = [json.loads(line) for line in stream.getvalue().splitlines()]
print(f"\nexported {len(records)} fine-tuning pairs, skipped {skipped} unlabeled clusters")
print(f"first pair source: {records[0]['source'][:70]}...")
print(f"first pair target: {records[0]['target'][:70]}...")
