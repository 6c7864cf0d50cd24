"""
Loading a dataset and reading its statistics
============================================

"""

from pathlib import Path

from quickview import corpus_stats, load_clusters, segment_sentences, tokenize

# The bundled synthetic dataset: one JSON object per line, each holding a
# cluster of topic-related news documents, some with a gold summary.
DATASET = Path(__file__).resolve().parents[1] / "tests" / "data" / "synthetic.jsonl"

clusters = load_clusters(DATASET)
print(f"loaded {len(clusters)} clusters from {DATASET.name}")

# Each document arrives already segmented into sentences.
first = clusters[0].documents[0]
print(f"\nfirst document: {first.id!r}")
print(f"anchor text:    {first.anchor_text!r}")
for sentence in first.sentences[:3]:
    print(f"  sentence {sentence.sent_index}: {sentence.text}")

# Tokenization is whitespace splitting over lowercased text with edge
# punctuation stripped; decimals like 60.2 survive intact.
sample = first.sentences[0].text
print(f"\ntokens of the first sentence: {tokenize(sample)}")

# segment_sentences is the same splitter the loader used, so joining the
# sentence texts back together round-trips the body.
resegmented = segment_sentences(first.body)
assert [s.text for s in resegmented] == [s.text for s in first.sentences]

# corpus_stats aggregates the numbers a dataset report needs: document
# counts, average lengths, a word-count histogram, and for every labeled
# cluster the (average document words, summary words) pair that a length
# model can later be fitted on.
stats = corpus_stats(clusters, bucket_width=50)
print(f"\nclusters:             {stats.cluster_count}")
print(f"avg docs per cluster: {stats.avg_docs_per_cluster:.3f}")
print(f"avg document words:   {stats.avg_doc_words:.2f}")
print(f"max document words:   {stats.max_doc_words}")

print("\ndocument length histogram (bucket width 50 words):")
for low, count in stats.doc_length_histogram:
    print(f"  {low:4d}-{low + 49:<4d} {'#' * count}")

print("\nlength pairs from the labeled clusters:")
for avg_words, summary_words in stats.length_pairs:
    print(f"  cluster avg {avg_words:7.2f} words -> summary {summary_words} words")
