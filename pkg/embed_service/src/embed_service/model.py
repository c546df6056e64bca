"""Deterministic contextual token encoder.

A small transformer encoder with weights drawn once from a generator seeded
by the model name, so the same build runs everywhere without downloading
checkpoints: inference is pure float64 numpy, bit-reproducible, and
context-sensitive through self-attention.

Tokens are segmented into fixed-width character pieces (the model's subword
step); each piece gets a hash-seeded embedding plus a sinusoidal position
code, the pieces run through the encoder stack, and a token's vector is the
mean of its piece vectors at the selected layer (default: last).

Model names follow ``mini-<layers>l-<dim>d``, e.g. ``mini-2l-64d``.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

import numpy as np

MODEL_NAME_RE = re.compile(r"^mini-(?P<layers>\d+)l-(?P<dim>\d+)d$")

DEFAULT_MODEL = "mini-2l-64d"

_PIECE_WIDTH = 4
_HEADS = 4


class UnknownModelError(ValueError):
    """The requested model name is not served by this process."""


def split_pieces(token: str) -> list[str]:
    """Fixed-width character segmentation; every token yields >= 1 piece."""
    if len(token) <= _PIECE_WIDTH:
        return [token]
    return [token[i : i + _PIECE_WIDTH] for i in range(0, len(token), _PIECE_WIDTH)]


def _seed_from(text: str) -> int:
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


def _piece_vector(piece: str, dim: int, model_seed: int) -> np.ndarray:
    rng = np.random.default_rng([model_seed, _seed_from(piece)])
    vector = rng.standard_normal(dim)
    return vector / np.linalg.norm(vector)


def _positional(n: int, dim: int) -> np.ndarray:
    positions = np.arange(n)[:, None].astype(np.float64)
    rates = np.exp(-np.arange(0, dim, 2) / dim * np.log(10000.0))
    codes = np.zeros((n, dim))
    codes[:, 0::2] = np.sin(positions * rates)
    codes[:, 1::2] = np.cos(positions * rates[: dim - dim // 2])
    return codes


def _layer_norm(x: np.ndarray, gain: np.ndarray, bias: np.ndarray) -> np.ndarray:
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    return gain * (x - mean) / np.sqrt(var + 1e-6) + bias


def _softmax(x: np.ndarray) -> np.ndarray:
    shifted = x - x.max(axis=-1, keepdims=True)
    expx = np.exp(shifted)
    return expx / expx.sum(axis=-1, keepdims=True)


@dataclass(frozen=True)
class _LayerWeights:
    wq: np.ndarray
    wk: np.ndarray
    wv: np.ndarray
    wo: np.ndarray
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    ln1_gain: np.ndarray
    ln1_bias: np.ndarray
    ln2_gain: np.ndarray
    ln2_bias: np.ndarray


class MiniTransformerEncoder:
    """Seeded-random transformer encoder serving per-token vectors."""

    def __init__(self, name: str = DEFAULT_MODEL):
        match = MODEL_NAME_RE.match(name)
        if not match:
            raise UnknownModelError(
                f"unknown model {name!r}; expected mini-<layers>l-<dim>d"
            )
        self.name = name
        self.n_layers = int(match["layers"])
        self.dim = int(match["dim"])
        if self.n_layers < 1 or self.dim < _HEADS or self.dim % _HEADS:
            raise UnknownModelError(
                f"model {name!r} needs >=1 layer and a dim divisible by {_HEADS}"
            )
        self._model_seed = _seed_from(name)
        rng = np.random.default_rng([self._model_seed, 0xC0DE])
        scale = 1.0 / np.sqrt(self.dim)
        hidden = 2 * self.dim

        def matrix(rows, cols):
            return rng.standard_normal((rows, cols)) * scale

        self._layers = [
            _LayerWeights(
                wq=matrix(self.dim, self.dim),
                wk=matrix(self.dim, self.dim),
                wv=matrix(self.dim, self.dim),
                wo=matrix(self.dim, self.dim),
                w1=matrix(self.dim, hidden),
                b1=rng.standard_normal(hidden) * 0.01,
                w2=matrix(hidden, self.dim),
                b2=rng.standard_normal(self.dim) * 0.01,
                ln1_gain=np.ones(self.dim),
                ln1_bias=np.zeros(self.dim),
                ln2_gain=np.ones(self.dim),
                ln2_bias=np.zeros(self.dim),
            )
            for _ in range(self.n_layers)
        ]

    def _attention(self, x: np.ndarray, weights: _LayerWeights) -> np.ndarray:
        n = x.shape[0]
        head_dim = self.dim // _HEADS
        q = (x @ weights.wq).reshape(n, _HEADS, head_dim).transpose(1, 0, 2)
        k = (x @ weights.wk).reshape(n, _HEADS, head_dim).transpose(1, 0, 2)
        v = (x @ weights.wv).reshape(n, _HEADS, head_dim).transpose(1, 0, 2)
        scores = q @ k.transpose(0, 2, 1) / np.sqrt(head_dim)
        mixed = _softmax(scores) @ v
        return mixed.transpose(1, 0, 2).reshape(n, self.dim) @ weights.wo

    def hidden_states(self, pieces: list[str]) -> list[np.ndarray]:
        """All layer activations for a piece sequence, embeddings first."""
        x = np.stack([_piece_vector(p, self.dim, self._model_seed) for p in pieces])
        x = x + _positional(len(pieces), self.dim)
        states = [x]
        for weights in self._layers:
            x = _layer_norm(x + self._attention(x, weights), weights.ln1_gain, weights.ln1_bias)
            ff = np.tanh(x @ weights.w1 + weights.b1) @ weights.w2 + weights.b2
            x = _layer_norm(x + ff, weights.ln2_gain, weights.ln2_bias)
            states.append(x)
        return states

    def encode(self, tokens: list[str], layer: int = -1) -> np.ndarray:
        """One vector per token: mean of the token's piece vectors at ``layer``."""
        pieces: list[str] = []
        spans: list[tuple[int, int]] = []
        for token in tokens:
            token_pieces = split_pieces(token)
            spans.append((len(pieces), len(pieces) + len(token_pieces)))
            pieces.extend(token_pieces)
        states = self.hidden_states(pieces)
        chosen = states[layer]
        return np.stack([chosen[start:stop].mean(axis=0) for start, stop in spans])
