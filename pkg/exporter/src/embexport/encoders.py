"""Encoder backends.

Two families:

* ``lab-point``: a deterministic reference encoder that places color
  tokens at their CIELAB coordinates (from a ``name,hex`` or
  ``name,category,hex,anchor`` CSV) plus a constant bias coordinate, so
  embedding geometry mirrors perceptual geometry. Non-color tokens get a
  small seeded pseudo-vector. Runs with no model downloads, which makes it
  the hermetic backend for tests and demos.

* ``hf:<model_id>``: a Hugging Face checkpoint. By default the input
  token-embedding rows are extracted; ``layer='final'`` switches to the
  final hidden states.
"""

from __future__ import annotations

import csv
import hashlib
import re
from pathlib import Path

import numpy as np

_WORD_RE = re.compile(r"[A-Za-z][A-Za-z'-]*")

LAB_POINT_BIAS = 100.0
LAB_POINT_MIN_DIM = 4


class EncoderError(Exception):
    pass


def tokenize(word: str) -> list[str]:
    tokens = [m.group(0).lower() for m in _WORD_RE.finditer(word)]
    if not tokens:
        raise EncoderError(f"word {word!r} produced no tokens")
    return tokens


def _srgb_to_lab(rgb: tuple[float, float, float]) -> tuple[float, float, float]:
    # standard sRGB (D65) -> XYZ -> CIELAB chain
    def inv_gamma(u: float) -> float:
        return u / 12.92 if u <= 0.04045 else ((u + 0.055) / 1.055) ** 2.4

    r, g, b = (inv_gamma(v) for v in rgb)
    matrix = (
        (0.4124564, 0.3575761, 0.1804375),
        (0.2126729, 0.7151522, 0.0721750),
        (0.0193339, 0.1191920, 0.9503041),
    )
    xyz = [row[0] * r + row[1] * g + row[2] * b for row in matrix]
    white = [sum(row) for row in matrix]
    eps, kappa = 216.0 / 24389.0, 24389.0 / 27.0

    def f(t: float) -> float:
        return t ** (1.0 / 3.0) if t > eps else (kappa * t + 16.0) / 116.0

    fx, fy, fz = (f(v / w) for v, w in zip(xyz, white))
    return 116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)


def _parse_hex(text: str) -> tuple[float, float, float]:
    raw = text.strip().lstrip("#")
    if len(raw) != 6:
        raise EncoderError(f"bad hex code {text!r}")
    return tuple(int(raw[i : i + 2], 16) / 255.0 for i in (0, 2, 4))


def load_color_table(path: str | Path) -> dict[str, tuple[float, float, float]]:
    """Token -> Lab from a color CSV (either the basic `name,hex` layout or
    the compound `name,category,hex,anchor` layout)."""
    table: dict[str, tuple[float, float, float]] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in next(csv.reader([line]))]
        if cells[0].lower() == "name":
            continue
        hex_col = 1 if len(cells) == 2 else 2
        lab = _srgb_to_lab(_parse_hex(cells[hex_col]))
        for token in tokenize(cells[0]):
            table.setdefault(token, lab)
    if not table:
        raise EncoderError(f"no color entries found in {path}")
    return table


class LabPointEncoder:
    """Deterministic perceptual reference encoder."""

    def __init__(self, color_table: dict[str, tuple[float, float, float]], dim: int = 8):
        if dim < LAB_POINT_MIN_DIM:
            raise EncoderError(f"lab-point dim must be >= {LAB_POINT_MIN_DIM}")
        self.table = color_table
        self.dim = dim

    def encode_token(self, token: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        lab = self.table.get(token.lower())
        if lab is not None:
            vec[:3] = lab
        else:
            # seeded pseudo-vector, small next to Lab magnitudes
            seed = int.from_bytes(hashlib.sha256(token.lower().encode()).digest()[:8], "little")
            rng = np.random.default_rng(seed)
            vec[:3] = rng.normal(0.0, 10.0, size=3)
        vec[3] = LAB_POINT_BIAS  # keeps vectors off the origin for cosine use
        return vec

    def encode_tokens(self, tokens: list[str]) -> np.ndarray:
        return np.stack([self.encode_token(t) for t in tokens])


class HfTokenEmbeddingEncoder:
    """Input token embeddings (or final hidden states) of a checkpoint.

    The ``final`` layer needs a text-only encoder whose forward accepts
    plain input ids; dual-tower checkpoints work with ``input`` only.
    """

    def __init__(self, model_id: str, layer: str = "input"):
        if layer not in ("input", "final"):
            raise EncoderError(f"unknown layer choice {layer!r}")
        try:
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:  # pragma: no cover
            raise EncoderError(f"transformers not installed: {exc}") from exc
        try:
            self.tokenizer = AutoTokenizer.from_pretrained(model_id)
            self.model = AutoModel.from_pretrained(model_id)
        except Exception as exc:
            raise EncoderError(f"cannot load encoder {model_id!r}: {exc}") from exc
        self.layer = layer
        if layer == "input":
            self.dim = int(self.model.get_input_embeddings().weight.shape[1])
        else:
            config = self.model.config
            hidden = getattr(config, "hidden_size", None)
            if hidden is None:  # dual-tower configs nest the text width
                text_config = getattr(config, "text_config", None)
                hidden = getattr(text_config, "hidden_size", None)
            if hidden is None:
                raise EncoderError(
                    f"cannot determine hidden width of {model_id!r} for layer=final"
                )
            self.dim = int(hidden)

    def encode_tokens(self, tokens: list[str]) -> np.ndarray:
        import torch

        text = " ".join(tokens)
        ids = self.tokenizer(text, add_special_tokens=False, return_tensors="pt")
        if ids["input_ids"].numel() == 0:
            raise EncoderError(f"tokenization produced no ids for {text!r}")
        with torch.no_grad():
            if self.layer == "input":
                rows = self.model.get_input_embeddings()(ids["input_ids"])[0]
            else:
                rows = self.model(**ids).last_hidden_state[0]
        return rows.double().cpu().numpy()


def make_encoder(encoder_id: str, colors_path: str | Path | None = None,
                 dim: int = 8, layer: str = "input"):
    if encoder_id == "lab-point":
        if colors_path is None:
            raise EncoderError("lab-point encoder needs --colors (a color CSV)")
        return LabPointEncoder(load_color_table(colors_path), dim=dim)
    if encoder_id.startswith("hf:"):
        return HfTokenEmbeddingEncoder(encoder_id[3:], layer=layer)
    raise EncoderError(f"unknown encoder {encoder_id!r}")
