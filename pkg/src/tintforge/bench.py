"""Deterministic benchmark construction: caption ingestion, color
filtering, single/multi split, seeded clustering, per-cluster sampling,
and compound-color substitution.

Every stage is a pure function of its inputs and the seed, so one seed
gives byte-identical output files.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InputError
from .vocab import BASIC_COLOR_NAMES, Category, Vocabulary

_WORD_RE = re.compile(r"[A-Za-z][A-Za-z'-]*")


class PromptGroup(enum.Enum):
    SINGLE = "single"
    MULTI = "multi"


@dataclass(frozen=True)
class Caption:
    id: str
    text: str
    embedding: np.ndarray | None = None

    def __post_init__(self):
        if not self.text:
            raise InputError(f"caption {self.id!r} has empty text")


@dataclass(frozen=True)
class Substitution:
    original: str
    compound: str
    category: Category
    hex: str
    fallback: bool = False

    def to_json_dict(self) -> dict:
        out = {
            "from": self.original,
            "to": self.compound,
            "category": self.category.value,
            "hex": self.hex,
        }
        if self.fallback:
            out["fallback"] = True
        return out


@dataclass(frozen=True)
class BenchPrompt:
    id: str
    prompt: str
    group: PromptGroup
    substitutions: list[Substitution]

    def __post_init__(self):
        n = len(self.substitutions)
        if self.group is PromptGroup.SINGLE and n != 1:
            raise InputError(f"single-color prompt {self.id!r} has {n} substitutions")
        if self.group is PromptGroup.MULTI and n < 2:
            raise InputError(f"multi-color prompt {self.id!r} has {n} substitutions")

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "prompt": self.prompt,
            "group": self.group.value,
            "substitutions": [s.to_json_dict() for s in self.substitutions],
        }


@dataclass
class FilterStats:
    total: int
    single: int
    multi: int
    dropped: int

    @property
    def retained_fraction(self) -> float:
        return (self.single + self.multi) / self.total if self.total else 0.0

    def to_json_dict(self) -> dict:
        return {
            "total_captions": self.total,
            "single": self.single,
            "multi": self.multi,
            "dropped": self.dropped,
            "retained_fraction": self.retained_fraction,
        }


def read_captions_jsonl(path: str | Path) -> list[Caption]:
    """Read `{"id": ..., "caption": ...}` JSON lines."""
    captions = []
    seen = set()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            cid, text = str(record["id"]), str(record["caption"])
        except (json.JSONDecodeError, KeyError) as exc:
            raise InputError(f"{path}:{lineno}: bad caption record: {exc}") from exc
        if cid in seen:
            raise InputError(f"{path}:{lineno}: duplicate caption id {cid!r}")
        seen.add(cid)
        captions.append(Caption(cid, text))
    return captions


def _basic_term_matches(text: str, lexicon: frozenset[str]) -> list[re.Match]:
    return [m for m in _WORD_RE.finditer(text) if m.group(0).lower() in lexicon]


def filter_color_captions(
    captions: list[Caption], basic_lexicon: tuple[str, ...] = BASIC_COLOR_NAMES
) -> tuple[list[Caption], list[Caption], FilterStats]:
    """Partition captions by the number of basic color terms they mention:
    exactly one goes to the single group, two or more to multi, none are
    dropped from the benchmark."""
    if not captions:
        raise InputError("caption list is empty")
    lexicon = frozenset(t.lower() for t in basic_lexicon)
    single, multi, dropped = [], [], 0
    for caption in captions:
        count = len(_basic_term_matches(caption.text, lexicon))
        if count == 1:
            single.append(caption)
        elif count >= 2:
            multi.append(caption)
        else:
            dropped += 1
    stats = FilterStats(len(captions), len(single), len(multi), dropped)
    return single, multi, stats


def tfidf_vectors(texts: list[str]) -> np.ndarray:
    """L2-normalized TF-IDF rows over lowercase word tokens. Shipped as the
    hermetic fallback feature set for clustering when no precomputed caption
    embeddings are supplied."""
    token_lists = [[m.group(0).lower() for m in _WORD_RE.finditer(t)] for t in texts]
    vocabulary = sorted({tok for toks in token_lists for tok in toks})
    index = {tok: i for i, tok in enumerate(vocabulary)}
    counts = np.zeros((len(texts), len(vocabulary)))
    for row, toks in enumerate(token_lists):
        for tok in toks:
            counts[row, index[tok]] += 1.0
    df = (counts > 0).sum(axis=0)
    idf = np.log((1.0 + len(texts)) / (1.0 + df)) + 1.0
    tfidf = counts * idf
    norms = np.linalg.norm(tfidf, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return tfidf / norms


@dataclass
class KMeansResult:
    assignments: np.ndarray
    centroids: np.ndarray
    wcss_history: list[float] = field(default_factory=list)


def _wcss(vectors: np.ndarray, assignments: np.ndarray, centroids: np.ndarray) -> float:
    diffs = vectors - centroids[assignments]
    return float(np.sum(diffs * diffs))


def kmeans(vectors, k: int, seed: int, max_iters: int = 100) -> KMeansResult:
    """Seeded k-means with k-means++ initialization.

    Deterministic for a given seed; empty clusters are repaired by handing
    them the point farthest from the centroid of the currently largest
    cluster. The recorded within-cluster sum of squares never increases
    between iterations.
    """
    pts = np.asarray(vectors, dtype=np.float64)
    if pts.ndim != 2:
        raise InputError(f"expected 2-D vectors, got shape {pts.shape}")
    n = pts.shape[0]
    if not 1 <= k <= n:
        raise InputError(f"k={k} must be in [1, {n}]")

    rng = np.random.default_rng(seed)
    centroids = np.empty((k, pts.shape[1]))
    centroids[0] = pts[rng.integers(n)]
    closest_sq = np.sum((pts - centroids[0]) ** 2, axis=1)
    for c in range(1, k):
        total = closest_sq.sum()
        if total == 0.0:
            centroids[c] = pts[rng.integers(n)]
        else:
            centroids[c] = pts[rng.choice(n, p=closest_sq / total)]
        closest_sq = np.minimum(closest_sq, np.sum((pts - centroids[c]) ** 2, axis=1))

    def assign(cents: np.ndarray) -> np.ndarray:
        sq = ((pts[:, None, :] - cents[None, :, :]) ** 2).sum(axis=2)
        return np.argmin(sq, axis=1)

    assignments = np.full(n, -1, dtype=np.int64)
    history: list[float] = []
    for _ in range(max_iters):
        new_assignments = assign(centroids)

        # Empty-cluster repair: the empty cluster takes over the point
        # farthest from the largest cluster's centroid, both as its centroid
        # and as a member. The moved point lands at distance zero, so the
        # objective cannot increase, and exact ties (duplicate points)
        # cannot deadlock the repair.
        repaired = False
        for _attempt in range(k):
            sizes = np.bincount(new_assignments, minlength=k)
            empties = np.flatnonzero(sizes == 0)
            if empties.size == 0:
                break
            donor = int(np.argmax(sizes))
            members = np.flatnonzero(new_assignments == donor)
            center = pts[members].mean(axis=0)
            farthest = members[int(np.argmax(np.sum((pts[members] - center) ** 2, axis=1)))]
            centroids[int(empties[0])] = pts[farthest]
            new_assignments[farthest] = int(empties[0])
            repaired = True

        converged = np.array_equal(new_assignments, assignments) and not repaired
        assignments = new_assignments
        for c in range(k):
            centroids[c] = pts[assignments == c].mean(axis=0)
        history.append(_wcss(pts, assignments, centroids))
        if converged:
            break
    return KMeansResult(assignments, centroids, history)


def sample_per_cluster(
    ids: list[str], assignments, per_cluster: int, seed: int
) -> list[str]:
    """Uniform without-replacement sample of up to ``per_cluster`` ids per
    cluster, visited in ascending cluster order; seeded and deterministic."""
    if per_cluster < 1:
        raise InputError(f"per_cluster must be >= 1, got {per_cluster}")
    assign = np.asarray(assignments)
    if len(ids) != len(assign):
        raise InputError("ids and assignments must have equal length")
    rng = np.random.default_rng(seed)
    chosen: list[str] = []
    for cluster in sorted(set(assign.tolist())):
        members = [ids[i] for i in np.flatnonzero(assign == cluster)]
        take = min(per_cluster, len(members))
        picks = rng.choice(len(members), size=take, replace=False)
        chosen.extend(members[i] for i in sorted(picks.tolist()))
    return chosen


def _compound_index(vocab: Vocabulary) -> dict[tuple[str, Category], list[str]]:
    table: dict[tuple[str, Category], list[str]] = {}
    for key in sorted(vocab.compounds):
        record = vocab.compounds[key]
        table.setdefault((record.basic_anchor, record.category), []).append(key)
    return table


def substitute_compounds(
    captions: list[Caption],
    vocab: Vocabulary,
    expansions_per_caption: int,
    seed: int,
) -> list[BenchPrompt]:
    """Expand each caption into ``expansions_per_caption`` prompts, replacing
    every basic color term with a compound anchored to it.

    The category is sampled uniformly over the five types, then the compound
    uniformly within (category, anchor). When a cell is empty the draw falls
    back to any compound for that anchor and the substitution is marked.
    """
    if expansions_per_caption < 1:
        raise InputError("expansions_per_caption must be >= 1")
    lexicon = frozenset(BASIC_COLOR_NAMES)
    by_cell = _compound_index(vocab)
    by_anchor: dict[str, list[str]] = {}
    for (anchor, _), names in by_cell.items():
        by_anchor.setdefault(anchor, []).extend(names)
    for anchor in by_anchor:
        by_anchor[anchor].sort()
    categories = list(Category)

    rng = np.random.default_rng(seed)
    prompts: list[BenchPrompt] = []
    for caption in captions:
        term_matches = _basic_term_matches(caption.text, lexicon)
        if not term_matches:
            raise InputError(f"caption {caption.id!r} has no basic color terms")
        for expansion in range(expansions_per_caption):
            substitutions = []
            pieces = []
            cursor = 0
            for match in term_matches:
                anchor = match.group(0).lower()
                if anchor not in by_anchor:
                    raise InputError(f"no compounds anchored to {anchor!r} in vocabulary")
                category = categories[int(rng.integers(len(categories)))]
                pool = by_cell.get((anchor, category))
                fallback = pool is None
                if fallback:
                    pool = by_anchor[anchor]
                compound = vocab.compounds[pool[int(rng.integers(len(pool)))]]
                substitutions.append(
                    Substitution(
                        original=match.group(0),
                        compound=compound.name,
                        category=compound.category,
                        hex=compound.hex,
                        fallback=fallback,
                    )
                )
                pieces.append(caption.text[cursor : match.start()])
                pieces.append(compound.name)
                cursor = match.end()
            pieces.append(caption.text[cursor:])
            group = PromptGroup.SINGLE if len(substitutions) == 1 else PromptGroup.MULTI
            prompts.append(
                BenchPrompt(
                    id=f"{caption.id}-{expansion}",
                    prompt="".join(pieces),
                    group=group,
                    substitutions=substitutions,
                )
            )
    return prompts


@dataclass
class BenchResult:
    prompts: list[BenchPrompt]
    stats: FilterStats
    cluster_sizes: dict[str, list[int]]


def build_bench(
    captions: list[Caption],
    vocab: Vocabulary,
    k: int = 20,
    per_cluster: int = 5,
    expansions: int = 5,
    seed: int = 42,
    embeddings: dict[str, np.ndarray] | None = None,
) -> BenchResult:
    """Full pipeline: filter -> split -> cluster -> sample -> substitute.

    ``embeddings`` optionally maps caption ids to precomputed feature
    vectors; captions without one fall back to TF-IDF features computed
    per group.
    """
    single, multi, stats = filter_color_captions(captions)
    prompts: list[BenchPrompt] = []
    cluster_sizes: dict[str, list[int]] = {}
    for offset, (group_name, group) in enumerate((("single", single), ("multi", multi))):
        if not group:
            raise InputError(f"no captions in the {group_name} group")
        if len(group) < k:
            raise InputError(
                f"{group_name} group has {len(group)} captions, fewer than k={k}"
            )
        if embeddings is not None:
            missing = [c.id for c in group if c.id not in embeddings]
            if missing:
                raise InputError(f"missing embeddings for captions: {missing[:5]}")
            features = np.stack([np.asarray(embeddings[c.id], float) for c in group])
        else:
            features = tfidf_vectors([c.text for c in group])
        clustering = kmeans(features, k, seed=seed + 1 + 2 * offset)
        sizes = np.bincount(clustering.assignments, minlength=k)
        cluster_sizes[group_name] = sizes.tolist()
        ids = [c.id for c in group]
        picked = set(
            sample_per_cluster(ids, clustering.assignments, per_cluster, seed + 2 + 2 * offset)
        )
        sampled = [c for c in group if c.id in picked]
        prompts.extend(
            substitute_compounds(sampled, vocab, expansions, seed + 10 + offset)
        )
    return BenchResult(prompts, stats, cluster_sizes)


def write_bench_jsonl(prompts: list[BenchPrompt], path: str | Path) -> None:
    lines = [json.dumps(p.to_json_dict(), ensure_ascii=True) for p in prompts]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
