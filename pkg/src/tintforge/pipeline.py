"""End-to-end flow: disambiguate -> classify -> retrieve -> blend ->
refine plan. Emits a JSON-serializable trace where every stage's output is
exactly what the corresponding module call returns in isolation."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .colorspace import format_hex
from .disambiguation import (
    DisambiguationResult,
    EndpointConfig,
    disambiguate_llm,
    disambiguate_offline,
)
from .embedding import BlendSpec, EmbeddingStore, blend_target, gaussian_weights, load_store
from .errors import InputError, PipelineStageError
from .vocab import BASIC_COLOR_NAMES, Vocabulary, load_vocab


@dataclass
class PipelineConfig:
    """Everything the full flow needs; validated on construction."""

    vocab_path: str | None = None
    store_path: str | None = None
    sigma: float = 20.0
    k: int = 3
    alpha: float = 20.0
    metric: str = "cosine"
    offline: bool = True
    endpoint: EndpointConfig | None = None
    seed: int = 0
    span_mode: str = "all"

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise InputError(f"sigma must be positive, got {self.sigma}")
        if self.k < 1:
            raise InputError(f"k must be >= 1, got {self.k}")
        if self.alpha < 0.0:
            raise InputError(f"alpha must be nonnegative, got {self.alpha}")
        if self.metric not in ("cosine", "euclidean"):
            raise InputError(f"unknown metric {self.metric!r}")
        if not self.offline and self.endpoint is None:
            raise InputError("endpoint settings required unless running offline")


def vector_checksum(vector: np.ndarray) -> str:
    """Stable identity for a blended vector: SHA-256 of its float32 bytes."""
    return hashlib.sha256(np.asarray(vector, dtype="<f4").tobytes()).hexdigest()


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineStageError:
        raise
    except Exception as exc:
        raise PipelineStageError(name, exc) from exc


def run_pipeline(prompt: str, config: PipelineConfig, session=None) -> dict:
    """Run the whole flow for one prompt and return the trace dict.

    The store is only opened once a color term actually needs blending, so
    colorless prompts run without one.
    """
    vocab: Vocabulary = _stage("load-vocab", load_vocab, config.vocab_path)

    if config.offline:
        result: DisambiguationResult = _stage(
            "disambiguate", disambiguate_offline, prompt, vocab
        )
    else:
        result = _stage(
            "disambiguate", disambiguate_llm, prompt, vocab, config.endpoint, session
        )

    trace: dict = {
        "prompt": prompt,
        "mode": "offline" if config.offline else "llm",
        "config": {"k": config.k, "sigma": config.sigma, "metric": config.metric,
                   "span_mode": config.span_mode},
        "disambiguation": result.to_json_dict(),
        "colors": [],
    }

    store: EmbeddingStore | None = None
    for analysis in result.analyses:
        entry: dict = {"term": analysis.term, "basic": analysis.basic_term,
                       "span": list(analysis.span)}
        if not analysis.resolved or analysis.reference_rgb is None:
            entry["unresolved"] = True
            trace["colors"].append(entry)
            continue

        rgb = analysis.reference_rgb
        group, nearest_basic = _stage("classify", vocab.classify_hue_group, rgb)
        entry["reference_hex"] = format_hex(rgb)
        entry["hue_group"] = group.value
        entry["nearest_basic"] = nearest_basic.name

        ranked = _stage("retrieve", vocab.topk_basic_in_group, rgb, config.k)
        entry["anchors"] = [
            {"name": basic.name, "delta_e": distance} for basic, distance in ranked
        ]

        spec = BlendSpec(
            anchors=[(basic.name, distance) for basic, distance in ranked],
            sigma=config.sigma,
        )
        weights = _stage("blend-weights", gaussian_weights, spec)
        entry["weights"] = [float(w) for w in weights]

        if store is None:
            if config.store_path is None:
                raise PipelineStageError(
                    "blend", InputError("no embedding store configured")
                )
            store = _stage("blend", load_store, config.store_path)
            missing = [n for n in BASIC_COLOR_NAMES if n not in store]
            if missing:
                raise PipelineStageError(
                    "blend", InputError(f"store lacks basic terms: {missing}")
                )
            trace["store"] = {"path": str(config.store_path), "dim": store.dim,
                              "entries": len(store)}
        target = _stage("blend", blend_target, store, spec)
        entry["e_target_checksum"] = vector_checksum(target)
        entry["token_plan"] = {
            "span": list(analysis.span),
            "span_mode": config.span_mode,
            "replacement": "e_target",
        }
        trace["colors"].append(entry)
    return trace
