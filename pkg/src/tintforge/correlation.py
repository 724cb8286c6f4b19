"""Alignment study between color-space distances and text-embedding
distances: Spearman rank correlation overall and per hue group."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .colorspace import SPACE_IDS, convert, pairwise_distance_matrix
from .embedding import EmbeddingStore, cosine_distance
from .errors import InputError, StoreError
from .vocab import BASIC_COLOR_NAMES, GROUP_MEMBERS, HueGroup, Vocabulary


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Ranks starting at 1; tied values share the average of their ranks."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman_rho(x, y) -> float:
    """Spearman rank correlation with average-rank tie handling.

    Raises when either input has zero rank variance, where the
    coefficient is undefined.
    """
    xs = np.asarray(x, dtype=np.float64)
    ys = np.asarray(y, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise InputError(f"length mismatch: {xs.shape} vs {ys.shape}")
    if len(xs) < 2:
        raise InputError("need at least 2 observations")
    rx = _average_ranks(xs)
    ry = _average_ranks(ys)
    rx -= rx.mean()
    ry -= ry.mean()
    vx = float(np.dot(rx, rx))
    vy = float(np.dot(ry, ry))
    if vx == 0.0 or vy == 0.0:
        raise InputError("rank correlation undefined: zero rank variance")
    rho = float(np.dot(rx, ry)) / np.sqrt(vx * vy)
    return max(-1.0, min(1.0, rho))


def embedding_distance_matrix(
    store: EmbeddingStore, names: list[str], metric: str = "cosine"
) -> np.ndarray:
    """Symmetric zero-diagonal matrix of embedding distances over ``names``."""
    if metric not in ("cosine", "euclidean"):
        raise StoreError(f"unknown metric {metric!r}")
    vectors = [store.get(name).astype(np.float64) for name in names]
    n = len(vectors)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if metric == "cosine":
                d = cosine_distance(vectors[i], vectors[j])
            else:
                d = float(np.linalg.norm(vectors[i] - vectors[j]))
            out[i, j] = out[j, i] = d
    return out


def _upper_triangle(matrix: np.ndarray, indices: list[int]) -> np.ndarray:
    vals = []
    for a in range(len(indices)):
        for b in range(a + 1, len(indices)):
            vals.append(matrix[indices[a], indices[b]])
    return np.asarray(vals)


@dataclass
class CorrelationReport:
    """Per-space alignment between perceptual and embedding geometry.

    ``rho_overall`` pools all 55 pairs of the 11 basic terms;
    ``rho_group_mean`` averages the defined group coefficients, since the
    aggregate can be read either way. Group coefficients are None when the
    group has too few varied pairs for a defined rank correlation.
    """

    space_id: str
    rho_overall: float | None
    rho_group_mean: float | None
    rho_warm: float | None
    rho_neutral: float | None
    rho_cool: float | None
    pair_counts: dict[str, int]
    names: list[str] = field(default_factory=list)
    color_matrix: np.ndarray | None = None
    embedding_matrix: np.ndarray | None = None

    def to_json_dict(self) -> dict:
        return {
            "space": self.space_id,
            "rho_overall": self.rho_overall,
            "rho_group_mean": self.rho_group_mean,
            "rho_warm": self.rho_warm,
            "rho_neutral": self.rho_neutral,
            "rho_cool": self.rho_cool,
            "pair_counts": dict(self.pair_counts),
        }


def _safe_rho(x: np.ndarray, y: np.ndarray) -> float | None:
    # a scope needs at least 3 varied pairs for a meaningful coefficient
    # (two pairs force rho to +-1); smaller scopes report as absent
    if len(x) < 3:
        return None
    try:
        return spearman_rho(x, y)
    except InputError:
        return None


def run_alignment_study(
    store: EmbeddingStore,
    vocab: Vocabulary,
    spaces: list[str] | None = None,
    metric: str = "cosine",
) -> list[CorrelationReport]:
    """Correlate pairwise distances of the 11 basic terms in each color
    space against their pairwise text-embedding distances."""
    spaces = list(spaces) if spaces is not None else list(SPACE_IDS)
    for space in spaces:
        if space not in SPACE_IDS:
            raise InputError(f"unknown color space {space!r}")
    names = list(BASIC_COLOR_NAMES)
    missing = [n for n in names if n not in store]
    if missing:
        raise StoreError(f"store is missing basic terms: {missing}")

    emb_matrix = embedding_distance_matrix(store, names, metric)
    group_indices = {
        group: [names.index(n) for n in members]
        for group, members in GROUP_MEMBERS.items()
    }

    reports = []
    for space in spaces:
        colors = [convert(vocab.basic(n).srgb, space) for n in names]
        color_matrix = pairwise_distance_matrix(space, colors)

        all_idx = list(range(len(names)))
        rho_overall = _safe_rho(
            _upper_triangle(color_matrix, all_idx), _upper_triangle(emb_matrix, all_idx)
        )
        group_rhos = {}
        pair_counts = {"overall": len(names) * (len(names) - 1) // 2}
        for group, idx in group_indices.items():
            xs = _upper_triangle(color_matrix, idx)
            ys = _upper_triangle(emb_matrix, idx)
            group_rhos[group] = _safe_rho(xs, ys)
            pair_counts[group.value] = len(xs)
        defined = [v for v in group_rhos.values() if v is not None]
        reports.append(
            CorrelationReport(
                space_id=space,
                rho_overall=rho_overall,
                rho_group_mean=float(np.mean(defined)) if defined else None,
                rho_warm=group_rhos[HueGroup.WARM],
                rho_neutral=group_rhos[HueGroup.NEUTRAL],
                rho_cool=group_rhos[HueGroup.COOL],
                pair_counts=pair_counts,
                names=names,
                color_matrix=color_matrix,
                embedding_matrix=emb_matrix,
            )
        )
    return reports
