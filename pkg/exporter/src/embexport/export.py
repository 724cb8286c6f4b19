"""The export operation: words in, TINTEMB1 store + JSON sidecar out."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .encoders import EncoderError, make_encoder, tokenize
from .tintemb import read_store, write_store

POLICIES = ("mean", "first")


@dataclass(frozen=True)
class ExportManifest:
    encoder: str
    words: list[str]
    policy: str = "mean"
    dim: int = 8
    colors_path: str | None = None
    layer: str = "input"

    def __post_init__(self):
        if not self.words:
            raise EncoderError("word list must be non-empty")
        if self.policy not in POLICIES:
            raise EncoderError(f"policy must be one of {POLICIES}, got {self.policy!r}")
        seen = set()
        for word in self.words:
            key = word.strip().lower()
            if not key:
                raise EncoderError("blank word in word list")
            if key in seen:
                raise EncoderError(f"duplicate word {word!r}")
            seen.add(key)


def read_words(path: str | Path) -> list[str]:
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            words.append(stripped)
    return words


def _reduce(rows: np.ndarray, policy: str) -> np.ndarray:
    if rows.shape[0] == 1 or policy == "first":
        return rows[0]
    return rows.mean(axis=0)


def export(manifest: ExportManifest, out_path: str | Path) -> dict:
    """Write the store and its sidecar; returns the sidecar dict.

    One vector per word; multi-token words are reduced per the manifest
    policy. The output is deterministic for a fixed manifest, and the
    written file is re-read and checksummed before the sidecar is emitted.
    """
    encoder = make_encoder(manifest.encoder, manifest.colors_path,
                           dim=manifest.dim, layer=manifest.layer)
    entries: dict[str, np.ndarray] = {}
    for word in manifest.words:
        rows = encoder.encode_tokens(tokenize(word))
        entries[word.strip()] = _reduce(np.asarray(rows, dtype=np.float64), manifest.policy)

    dim = encoder.dim
    write_store({k: v.astype("<f4") for k, v in entries.items()}, dim, out_path)

    # self-check the emitted bytes, then checksum what a consumer will read
    stored_dim, stored = read_store(out_path)
    if stored_dim != dim or sorted(stored) != sorted(entries):
        raise EncoderError("store self-check failed after write")
    sidecar = {
        "format": "TINTEMB1",
        "encoder": manifest.encoder,
        "layer": manifest.layer,
        "policy": manifest.policy,
        "dim": dim,
        "words": list(stored),
        "checksums": {
            name: hashlib.sha256(vec.astype("<f4").tobytes()).hexdigest()
            for name, vec in stored.items()
        },
    }
    sidecar_path = Path(str(out_path) + ".json")
    sidecar_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n",
                            encoding="utf-8")
    return sidecar
