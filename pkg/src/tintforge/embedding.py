"""File-backed store of named token-embedding vectors, plus linear
interpolation and Gaussian-softmax blending of color embeddings.

Store files use the TINTEMB1 layout, little-endian:
magic ``TINTEMB1`` | u32 entry count | u32 dim | per entry:
u16 name length, UTF-8 name bytes, dim float32 values.
Vectors are stored as float32; all blending math runs in float64.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import StoreError

MAGIC = b"TINTEMB1"


class EmbeddingStore:
    """Named vectors of one fixed dimension; immutable by convention after load."""

    def __init__(self, dim: int, entries: dict[str, np.ndarray] | None = None):
        if dim < 1:
            raise StoreError(f"dimension must be positive, got {dim}")
        self.dim = int(dim)
        self._entries: dict[str, np.ndarray] = {}
        for name, vec in (entries or {}).items():
            self.add(name, vec)

    def add(self, name: str, vector) -> None:
        if not name:
            raise StoreError("entry names must be non-empty")
        if name in self._entries:
            raise StoreError(f"duplicate entry name {name!r}")
        vec = np.asarray(vector, dtype=np.float32)
        if vec.shape != (self.dim,):
            raise StoreError(
                f"vector for {name!r} has shape {vec.shape}, expected ({self.dim},)"
            )
        self._entries[name] = vec

    def get(self, name: str) -> np.ndarray:
        try:
            return self._entries[name]
        except KeyError:
            raise StoreError(f"no entry named {name!r} in store") from None

    def names(self) -> list[str]:
        return list(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, name: str) -> bool:
        return name in self._entries


def load_store(path: str | Path) -> EmbeddingStore:
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise StoreError(f"cannot read store {path}: {exc}") from exc

    if len(blob) < len(MAGIC) + 8:
        raise StoreError(f"{path}: truncated header")
    if blob[: len(MAGIC)] != MAGIC:
        raise StoreError(f"{path}: bad magic {blob[:8]!r}")
    count, dim = struct.unpack_from("<II", blob, len(MAGIC))
    store = EmbeddingStore(dim)
    offset = len(MAGIC) + 8
    for _ in range(count):
        if offset + 2 > len(blob):
            raise StoreError(f"{path}: truncated at entry header")
        (name_len,) = struct.unpack_from("<H", blob, offset)
        offset += 2
        end = offset + name_len + 4 * dim
        if end > len(blob):
            raise StoreError(f"{path}: truncated entry body")
        name = blob[offset : offset + name_len].decode("utf-8")
        offset += name_len
        vec = np.frombuffer(blob, dtype="<f4", count=dim, offset=offset)
        offset += 4 * dim
        store.add(name, vec)
    if offset != len(blob):
        raise StoreError(f"{path}: {len(blob) - offset} trailing bytes")
    return store


def save_store(store: EmbeddingStore, path: str | Path) -> None:
    parts = [MAGIC, struct.pack("<II", len(store), store.dim)]
    for name in store.names():
        raw = name.encode("utf-8")
        parts.append(struct.pack("<H", len(raw)))
        parts.append(raw)
        parts.append(store.get(name).astype("<f4").tobytes())
    Path(path).write_bytes(b"".join(parts))


@dataclass(frozen=True)
class BlendSpec:
    """Anchors with perceptual distances (color-difference units) and the
    temperature-like width sigma controlling how sharply weights decay."""

    anchors: list[tuple[str, float]]
    sigma: float = 20.0

    def __post_init__(self):
        if not self.anchors:
            raise StoreError("blend spec needs at least one anchor")
        if self.sigma <= 0.0:
            raise StoreError(f"sigma must be positive, got {self.sigma}")
        for name, d in self.anchors:
            if d < 0.0:
                raise StoreError(f"negative distance {d} for anchor {name!r}")


def gaussian_weights(spec: BlendSpec) -> np.ndarray:
    """softmax(-d_i^2 / (2 sigma^2)) over the anchors, in float64."""
    d = np.asarray([dist for _, dist in spec.anchors], dtype=np.float64)
    logits = -(d * d) / (2.0 * spec.sigma * spec.sigma)
    logits -= logits.max()  # stable under tiny sigma
    w = np.exp(logits)
    return w / w.sum()


def weighted_blend(vectors, weights) -> np.ndarray:
    """Weighted sum of equal-dimension vectors in float64. This single
    kernel backs both blending and interpolation so a two-anchor blend with
    weights [alpha, 1-alpha] equals lerp bit for bit."""
    stacked = np.stack([np.asarray(v, dtype=np.float64) for v in vectors])
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (stacked.shape[0],):
        raise StoreError(f"{len(w)} weights for {stacked.shape[0]} vectors")
    return w @ stacked


def blend_target(store: EmbeddingStore, spec: BlendSpec) -> np.ndarray:
    """Convex combination of the anchor vectors under gaussian_weights."""
    weights = gaussian_weights(spec)
    return weighted_blend([store.get(name) for name, _ in spec.anchors], weights)


def lerp(a, b, alpha: float) -> np.ndarray:
    """alpha * a + (1 - alpha) * b, componentwise."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape:
        raise StoreError(f"dim mismatch: {va.shape} vs {vb.shape}")
    if not 0.0 <= alpha <= 1.0:
        raise StoreError(f"alpha must be in [0, 1], got {alpha}")
    return weighted_blend([va, vb], [alpha, 1.0 - alpha])


def refine_prompt_embedding(
    prompt_tokens: np.ndarray,
    color_token_position: int | tuple[int, int],
    e_target: np.ndarray,
    span_mode: str = "all",
) -> np.ndarray:
    """Return a copy of the token-embedding sequence with the color slot(s)
    replaced by ``e_target``.

    ``color_token_position`` is a single index or a half-open (start, end)
    span. For spans, ``span_mode='all'`` overwrites every token in the span
    (the default, so leftover object words cannot re-trigger the original
    failure mode) while ``'first'`` touches only the first token.
    """
    seq = np.array(prompt_tokens, dtype=np.float64, copy=True)
    if seq.ndim != 2:
        raise StoreError(f"expected a (tokens, dim) sequence, got shape {seq.shape}")
    target = np.asarray(e_target, dtype=np.float64)
    if target.shape != (seq.shape[1],):
        raise StoreError(
            f"target dim {target.shape} does not match sequence dim ({seq.shape[1]},)"
        )
    if isinstance(color_token_position, int):
        span = (color_token_position, color_token_position + 1)
    else:
        span = (int(color_token_position[0]), int(color_token_position[1]))
    if not (0 <= span[0] < span[1] <= seq.shape[0]):
        raise StoreError(f"span {span} out of range for {seq.shape[0]} tokens")
    if span_mode == "all":
        seq[span[0] : span[1]] = target
    elif span_mode == "first":
        seq[span[0]] = target
    else:
        raise StoreError(f"unknown span_mode {span_mode!r}")
    return seq


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise StoreError("cosine distance undefined for zero vectors")
    return 1.0 - float(np.dot(a, b)) / (na * nb)


def nearest(store: EmbeddingStore, vector, metric: str = "cosine") -> tuple[str, float]:
    """Closest store entry to ``vector``; ties resolved by name order."""
    vec = np.asarray(vector, dtype=np.float64)
    if len(store) == 0:
        raise StoreError("store is empty")
    best: tuple[float, str] | None = None
    for name in sorted(store.names()):
        entry = store.get(name).astype(np.float64)
        if metric == "cosine":
            d = cosine_distance(vec, entry)
        elif metric == "euclidean":
            d = float(np.linalg.norm(vec - entry))
        else:
            raise StoreError(f"unknown metric {metric!r}")
        if best is None or d < best[0]:
            best = (d, name)
    return best[1], best[0]
