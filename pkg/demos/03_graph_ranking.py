"""
Ranking sentences on a similarity graph
=======================================

Sentences become vertices, cosine similarities become edge weights, and a
weighted PageRank iteration

    S(Vi) = (1 - d) + d * sum_j ( w_ji / sum_k w_jk ) * S(Vj)

scores every vertex by how central it is among its neighbors.
"""

from quickview import (
    RankConfig,
    SimilarityGraph,
    build_graph,
    embed,
    fit_tfidf,
    pagerank,
    select_top,
    tokenize,
)

texts = [
    "Bão lớn đổ bộ vào miền trung sáng nay.",
    "Cơn bão mạnh đổ bộ miền trung gây mưa lớn.",
    "Mưa lớn kéo dài gây ngập nhiều nơi.",
    "Giải bóng đá kết thúc với kết quả bất ngờ.",
    "Đội chủ nhà thắng trận chung kết bóng đá.",
    "Giá xăng tăng nhẹ từ chiều qua.",
]

# Fit the vector space on the very sentences we are ranking and build the
# pairwise cosine graph. refs identify each vertex as (document, sentence).
units = [tokenize(t) for t in texts]
vectors = embed(fit_tfidf(units), texts)
refs = [(0, i) for i in range(len(texts))]
graph = build_graph(vectors, refs)

print("edge weights (rounded):")
for row in graph.weights:
    print("  " + " ".join(f"{w:.2f}" for w in row))

# Run the iteration with the standard damping 0.85. Scores start at 1.0
# and settle within the tolerance in a handful of passes.
result = pagerank(graph, RankConfig())
print(f"\nconverged after {result.iterations} iterations (residual {result.residual:.2e})")
for text, score in sorted(zip(texts, result.scores), key=lambda p: -p[1]):
    print(f"  {score:.4f}  {text}")

# The two storm reports back each other up, so they rank highest; the
# isolated petrol-price sentence has no neighbors and drops to 1 - d.
assert min(result.scores) == 1.0 - 0.85

# select_top keeps the best-scored sentences but returns them in document
# order, which is what a readable summary wants.
top = select_top(result.scores, graph.sentence_refs, top_n=3)
print("\ntop 3 in document order:")
for ranked in top:
    print(f"  ref={ranked.sentence_ref} rank={ranked.rank} score={ranked.score:.4f}")

# With damping 0 the neighbor term vanishes and every score is exactly 1:
flat = pagerank(graph, RankConfig(damping=0.0))
assert set(flat.scores) == {1.0}
print("\ndamping 0 flattens all scores to 1.0, as the update rule says")

# Scaling all weights by a constant leaves the ranking untouched, because
# each row of the transition matrix is normalized by its own sum.
scaled = pagerank(
    SimilarityGraph(weights=graph.weights * 10, sentence_refs=graph.sentence_refs),
    RankConfig(),
)
drift = max(abs(a - b) for a, b in zip(result.scores, scaled.scores))
print(f"after scaling every weight by 10 the scores drift by {drift:.1e}")
