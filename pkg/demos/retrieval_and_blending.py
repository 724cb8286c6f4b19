"""
Hue-grouped retrieval and Gaussian blending
===========================================

Given a target color, find its hue group, retrieve the nearest basic
anchors inside that group, and blend their embeddings with softmax weights
driven by perceptual distance.
"""

import numpy as np

from tintforge.embedding import BlendSpec, EmbeddingStore, blend_target, gaussian_weights, nearest
from tintforge.colorspace import parse_hex
from tintforge.vocab import load_vocab

vocab = load_vocab()

############################################################################
# Classify, then retrieve within the group
# ----------------------------------------
target = parse_hex("#FF7F50")  # a coral tone
group, nearest_basic = vocab.classify_hue_group(target)
print(f"#FF7F50 lands in the {group.value} group, nearest anchor: {nearest_basic.name}")

ranked = vocab.topk_basic_in_group(target, k=3)
for basic, distance in ranked:
    print(f"  {basic.name:8s} deltaE00 = {distance:6.2f}")

############################################################################
# Distance-driven weights
# -----------------------
# The width parameter acts like a temperature: small sigma concentrates
# all mass on the closest anchor, large sigma approaches uniform.
spec = BlendSpec([(b.name, d) for b, d in ranked], sigma=20.0)
print("weights at sigma=20:", gaussian_weights(spec).round(4))
for sigma in (5.0, 50.0, 1e6):
    w = gaussian_weights(BlendSpec(spec.anchors, sigma=sigma))
    print(f"weights at sigma={sigma:g}:", w.round(4))

############################################################################
# Blending real vectors
# ---------------------
# A small synthetic store stands in for text-encoder embeddings.
rng = np.random.default_rng(0)
store = EmbeddingStore(16, {
    name: rng.normal(size=16).astype(np.float32)
    for name in vocab.basics
})
e_target = blend_target(store, spec)
print("blended vector (first 4 comps):", e_target[:4].round(3))
print("closest store entry to the blend:", nearest(store, e_target)[0])

############################################################################
# Interpolation sweep between two anchors
# ---------------------------------------
# Walking the blend from orange toward yellow flips the nearest neighbor
# exactly once.
e_orange = store.get("orange").astype(float)
e_yellow = store.get("yellow").astype(float)
labels = []
for i in range(11):
    alpha = i / 10
    mixed = alpha * e_yellow + (1 - alpha) * e_orange
    labels.append(nearest(store, mixed)[0])
print("sweep labels:", " ".join(labels))
