"""
TF-IDF vectors and cosine similarity
====================================

"""

import math

from quickview import SentenceVector, cosine, embed, fit_tfidf, tokenize

# A vector space is fitted on tokenized units. Here: four tiny sentences.
units = [
    tokenize("mưa lớn gây ngập đường"),
    tokenize("mưa nhỏ trong đêm"),
    tokenize("nắng nóng kéo dài"),
    tokenize("đường ngập sau mưa lớn"),
]
model = fit_tfidf(units)
print(f"vocabulary ({model.dim} terms): {sorted(model.vocabulary, key=model.vocabulary.get)}")

# idf follows the smoothed formula ln((1 + N) / (1 + df)) + 1, so even a
# term present in every unit keeps positive weight.
print("\nidf per term:")
for term, dim in model.vocabulary.items():
    df = sum(1 for unit in units if term in unit)
    print(f"  {term:8s} df={df}  idf={model.idf[dim]:.4f}")
assert model.idf[model.vocabulary["mưa"]] == math.log(5 / 4) + 1

# embed() turns raw strings (tokenized internally) into tf * idf vectors
# over the fitted vocabulary; unseen words are simply skipped.
vectors = embed(model, ["mưa lớn gây ngập", "chưa từng thấy từ nào ở đây"])
print(f"\nfirst vector norm:  {vectors[0].norm:.4f}")
print(f"out-of-vocabulary text becomes the zero vector: norm {vectors[1].norm}")

# Cosine similarity compares any two vectors of the same dimension.
# The usual sanity anchors hold: identical direction 1, orthogonal 0,
# zero vector scores 0 by convention.
a = SentenceVector([1.0, 2.0, 3.0])
b = SentenceVector([4.0, 5.0, 6.0])
print(f"\ncos((1,2,3), (4,5,6)) = {cosine(a, b):.4f}  (hand value 0.9746)")
print(f"cos(a, a)             = {cosine(a, a):.4f}")
print(f"cos(a, -a)            = {cosine(a, SentenceVector([-1.0, -2.0, -3.0])):.4f}")
print(f"cos(a, 0)             = {cosine(a, SentenceVector([0.0, 0.0, 0.0])):.4f}")

# Scaling either argument changes nothing: only direction matters.
scaled = SentenceVector(a.values * 1000)
assert abs(cosine(scaled, b) - cosine(a, b)) < 1e-12

# Similar sentences land close together in the fitted space.
texts = ["mưa lớn gây ngập đường", "đường ngập sau mưa lớn", "nắng nóng kéo dài"]
va, vb, vc = embed(model, texts)
print(f"\nsim({texts[0]!r}, {texts[1]!r}) = {cosine(va, vb):.4f}")
print(f"sim({texts[0]!r}, {texts[2]!r}) = {cosine(va, vc):.4f}")
