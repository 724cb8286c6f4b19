"""Symmetric-KL binding loss over cross-attention maps and the guided
latent update, with a synthetic attention provider for desk-scale
verification of gradients and descent behavior.

A provider stands in for the cross-attention of a denoising network:
anything exposing ``evaluate(latent, pairs) -> [(color_map, entity_map)]``
works. Providers that also implement ``loss_gradient(latent, pairs)`` get
their analytic gradient used; everything else falls back to central finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np

from .errors import GradientError, InputError

# KL is undefined at zero cells; every map is mixed with this much uniform
# mass before taking logs, preserving normalization.
SMOOTHING_EPS = 1e-8


@dataclass(frozen=True)
class AttentionMap:
    """Nonnegative spatial attention for one token, normalized to sum 1."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 2:
            raise InputError(f"attention map must be 2-D, got shape {vals.shape}")
        if np.any(vals < 0.0):
            raise InputError("attention map has negative entries")
        total = float(vals.sum())
        if abs(total - 1.0) > 1e-9:
            raise InputError(f"attention map sums to {total}, expected 1")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class BindingPair:
    """Indices of one color token and its entity token in the prompt."""

    color_token_index: int
    entity_token_index: int

    def __post_init__(self):
        if self.color_token_index == self.entity_token_index:
            raise InputError("color and entity token indices must be distinct")
        if min(self.color_token_index, self.entity_token_index) < 0:
            raise InputError("token indices must be nonnegative")


@dataclass(frozen=True)
class LatentState:
    """Flattened latent vector at one denoising step."""

    x: np.ndarray
    step: int = 0

    def __post_init__(self):
        vec = np.asarray(self.x, dtype=np.float64)
        object.__setattr__(self, "x", vec)
        if vec.ndim != 1:
            raise InputError(f"latent must be 1-D, got shape {vec.shape}")
        if not np.all(np.isfinite(vec)):
            raise InputError("latent has non-finite entries")


@runtime_checkable
class AttentionProvider(Protocol):
    def evaluate(
        self, latent: LatentState, pairs: list[BindingPair]
    ) -> list[tuple[AttentionMap, AttentionMap]]:
        """Deterministic per latent; maps satisfy AttentionMap invariants."""
        ...


def _smooth(values: np.ndarray, eps: float) -> np.ndarray:
    return (1.0 - eps) * values + eps / values.size


def kl_divergence(p: AttentionMap, q: AttentionMap, eps: float = SMOOTHING_EPS) -> float:
    """KL(p || q) after mixing both maps with ``eps`` uniform mass."""
    if p.shape != q.shape:
        raise InputError(f"shape mismatch: {p.shape} vs {q.shape}")
    ps = _smooth(p.values, eps)
    qs = _smooth(q.values, eps)
    return float(np.sum(ps * np.log(ps / qs)))


def binding_loss(
    pair_maps: list[tuple[AttentionMap, AttentionMap]], eps: float = SMOOTHING_EPS
) -> tuple[float, list[float]]:
    """Total and per-pair symmetrized KL between color and entity maps."""
    per_pair = [
        0.5 * kl_divergence(a_color, a_entity, eps)
        + 0.5 * kl_divergence(a_entity, a_color, eps)
        for a_color, a_entity in pair_maps
    ]
    return float(sum(per_pair)), per_pair


def total_binding_loss(
    provider: AttentionProvider, latent: LatentState, pairs: list[BindingPair]
) -> float:
    total, _ = binding_loss(provider.evaluate(latent, pairs))
    return total


def numeric_loss_gradient(
    provider: AttentionProvider,
    latent: LatentState,
    pairs: list[BindingPair],
    h: float = 1e-5,
) -> np.ndarray:
    """Central-difference gradient of the total loss; works for any provider."""
    x = latent.x
    grad = np.zeros_like(x)
    for i in range(len(x)):
        bump = np.zeros_like(x)
        bump[i] = h
        hi = total_binding_loss(provider, LatentState(x + bump, latent.step), pairs)
        lo = total_binding_loss(provider, LatentState(x - bump, latent.step), pairs)
        grad[i] = (hi - lo) / (2.0 * h)
    return grad


def binding_step(
    latent: LatentState,
    provider: AttentionProvider,
    pairs: list[BindingPair],
    alpha: float,
) -> LatentState:
    """One guided update: x <- x - alpha * grad(total binding loss)."""
    if alpha < 0.0:
        raise InputError(f"alpha must be nonnegative, got {alpha}")
    if hasattr(provider, "loss_gradient"):
        _, grad = provider.loss_gradient(latent, pairs)
    else:
        grad = numeric_loss_gradient(provider, latent, pairs)
    if not np.all(np.isfinite(grad)):
        bad = int(np.size(grad) - np.isfinite(grad).sum())
        raise GradientError(f"{bad} non-finite gradient entries at step {latent.step}")
    return LatentState(latent.x - alpha * grad, latent.step + 1)


class SyntheticAttentionProvider:
    """Smooth test double: each token's map is softmax(W_t^T x + b_t)
    reshaped to (H, W), with fixed random parameters drawn per seed."""

    def __init__(self, seed: int, latent_dim: int, height: int, width: int, n_pairs: int):
        if min(latent_dim, height, width, n_pairs) < 1:
            raise InputError("all synthetic provider dimensions must be positive")
        self.latent_dim = latent_dim
        self.height = height
        self.width = width
        self.n_pairs = n_pairs
        cells = height * width
        rng = np.random.default_rng(seed)
        n_tokens = 2 * n_pairs
        # modest parameter scale keeps maps diffuse and the loss well-conditioned
        self._w = rng.normal(0.0, 1.0 / np.sqrt(latent_dim), size=(n_tokens, latent_dim, cells))
        self._b = rng.normal(0.0, 0.5, size=(n_tokens, cells))

    def default_pairs(self) -> list[BindingPair]:
        return [BindingPair(2 * i, 2 * i + 1) for i in range(self.n_pairs)]

    def _logits(self, x: np.ndarray, token: int) -> np.ndarray:
        if not 0 <= token < self._w.shape[0]:
            raise InputError(f"token index {token} out of range")
        return self._w[token].T @ x + self._b[token]

    def _softmax(self, z: np.ndarray) -> np.ndarray:
        e = np.exp(z - z.max())
        return e / e.sum()

    def _map(self, x: np.ndarray, token: int) -> np.ndarray:
        return self._softmax(self._logits(x, token))

    def evaluate(
        self, latent: LatentState, pairs: list[BindingPair]
    ) -> list[tuple[AttentionMap, AttentionMap]]:
        shape = (self.height, self.width)
        out = []
        for pair in pairs:
            a_color = self._map(latent.x, pair.color_token_index).reshape(shape)
            a_entity = self._map(latent.x, pair.entity_token_index).reshape(shape)
            out.append((AttentionMap(a_color), AttentionMap(a_entity)))
        return out

    def map_jacobian(self, latent: LatentState, token: int) -> tuple[np.ndarray, np.ndarray]:
        """Flattened map A and its analytic Jacobian dA/dx of shape (cells, D)."""
        a = self._map(latent.x, token)
        # dA_j/dx = sum_k A_j (delta_jk - A_k) W[:,k] -> (diag(A) - A A^T) W^T
        jac = (np.diag(a) - np.outer(a, a)) @ self._w[token].T
        return a, jac

    def loss_gradient(
        self, latent: LatentState, pairs: list[BindingPair], eps: float = SMOOTHING_EPS
    ) -> tuple[float, np.ndarray]:
        """Analytic (total loss, gradient w.r.t. the latent)."""
        x = latent.x
        total = 0.0
        grad = np.zeros_like(x)
        for pair in pairs:
            a_c = self._map(x, pair.color_token_index)
            a_e = self._map(x, pair.entity_token_index)
            p = _smooth(a_c, eps)
            q = _smooth(a_e, eps)
            log_ratio = np.log(p / q)
            total += 0.5 * float(np.sum(p * log_ratio) - np.sum(q * log_ratio))
            # d(pair loss)/d(smoothed maps)
            du_p = 0.5 * (log_ratio + 1.0) - 0.5 * (q / p)
            du_q = 0.5 * (-log_ratio + 1.0) - 0.5 * (p / q)
            for token, a, du in (
                (pair.color_token_index, a_c, du_p),
                (pair.entity_token_index, a_e, du_q),
            ):
                u = (1.0 - eps) * du  # through the smoothing mix
                g_z = a * (u - float(np.dot(a, u)))  # softmax backward
                grad += self._w[token] @ g_z
        return total, grad


def synthetic_provider(
    seed: int, latent_dim: int, height: int, width: int, n_pairs: int
) -> SyntheticAttentionProvider:
    """Factory kept as a plain function for symmetry with the other ops."""
    return SyntheticAttentionProvider(seed, latent_dim, height, width, n_pairs)


def guide_demo_trace(
    seed: int,
    latent_dim: int,
    height: int,
    width: int,
    n_pairs: int,
    alpha: float,
    steps: int,
) -> list[tuple[int, float, float]]:
    """Run repeated binding steps from a seeded random latent.

    Returns one (step, loss, grad_norm) row per step, evaluated before
    each update.
    """
    provider = synthetic_provider(seed, latent_dim, height, width, n_pairs)
    pairs = provider.default_pairs()
    rng = np.random.default_rng(seed + 1)
    latent = LatentState(rng.normal(0.0, 1.0, size=latent_dim))
    rows = []
    for step in range(steps):
        loss, grad = provider.loss_gradient(latent, pairs)
        rows.append((step, loss, float(np.linalg.norm(grad))))
        latent = LatentState(latent.x - alpha * grad, latent.step + 1)
    return rows
