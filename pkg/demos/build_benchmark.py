"""
Building a prompt benchmark
===========================

Filter captions for color terms, split single- from multi-color, cluster
each group, sample per cluster, then swap basic terms for compound color
names. One seed makes the whole pipeline reproducible byte for byte.
"""

from tintforge.bench import Caption, build_bench, filter_color_captions
from tintforge.vocab import load_vocab

vocab = load_vocab()

############################################################################
# A small caption corpus
# ----------------------
subjects = ["a gardener", "a courier", "a violinist", "a welder", "a barista"]
scenes = [
    "waters seedlings in the greenhouse",
    "pedals across the rainy intersection",
    "rosins a bow outside the concert hall",
    "grinds a seam on the workshop floor",
    "stacks cups behind the espresso bar",
]
colors = ["red", "blue", "green", "yellow", "purple", "orange"]

captions = []
serial = 0
for subject, scene in zip(subjects, scenes):
    for color in colors:
        captions.append(Caption(f"s{serial}", f"{subject} in a {color} apron {scene}"))
        serial += 1
        captions.append(Caption(
            f"m{serial}",
            f"{subject} in a {color} apron {scene} beside a "
            f"{colors[(serial + 3) % len(colors)]} cart",
        ))
        serial += 1
captions.append(Caption("plain0", "a pigeon struts along the window ledge"))

############################################################################
# Filtering mirrors how the source corpus was reduced
# ---------------------------------------------------
single, multi, stats = filter_color_captions(captions)
print(f"kept {stats.single} single-color and {stats.multi} multi-color captions "
      f"({stats.retained_fraction:.1%} of {stats.total})")

############################################################################
# Cluster, sample, substitute
# ---------------------------
result = build_bench(captions, vocab, k=5, per_cluster=3, expansions=2, seed=11)
print("benchmark prompts:", len(result.prompts))
print("cluster sizes:", result.cluster_sizes)

############################################################################
# What came out
# -------------
for prompt in result.prompts[:4]:
    subs = ", ".join(f"{s.original}->{s.compound} [{s.category.value}]"
                     for s in prompt.substitutions)
    print(f"  [{prompt.group.value}] {prompt.prompt}")
    print(f"      substitutions: {subs}")

# every substitution stays anchored to the term it replaced
consistent = all(
    vocab.compound(s.compound.lower()).basic_anchor == s.original.lower()
    for p in result.prompts for s in p.substitutions
)
print("anchor consistency:", consistent)
