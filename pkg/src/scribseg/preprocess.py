"""Spectral normalization and channel-reduction front ends.

Produces the input variants the evaluation compares: L1-normalized spectra,
a PCA feature stack (stand-in for externally computed deep features, which
can be supplied as CST files instead), and a 3-channel RGB reconstruction
from band averages.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import ChannelStack


def l1_normalize(stack: ChannelStack) -> ChannelStack:
    """Divide each pixel spectrum by its L1 norm; zero spectra pass through.

    Reduces illumination variation: after normalization every nonzero pixel
    satisfies sum_c |v_c| = 1.
    """
    data = stack.data.astype(np.float64)
    norms = np.abs(data).sum(axis=2, keepdims=True)
    out = np.divide(data, norms, out=np.zeros_like(data), where=norms > 0)
    return ChannelStack(out.astype(np.float32))


def pca_features(stack: ChannelStack, k: int) -> ChannelStack:
    """Project spectra onto the top-k principal components.

    Spectra are mean-centered and projected onto the k eigenvectors of the
    C x C channel covariance with the largest eigenvalues. Each eigenvector's
    sign is fixed so its largest-magnitude entry is positive, making the
    output deterministic.
    """
    c = stack.channels
    if not 1 <= k <= c:
        raise ValueError(f"k must be in [1, {c}], got {k}")
    x = stack.data.reshape(-1, c).astype(np.float64)
    x = x - x.mean(axis=0)
    cov = (x.T @ x) / x.shape[0]
    try:
        eigvals, eigvecs = np.linalg.eigh(cov)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"covariance eigen-decomposition failed: {exc}") from exc
    order = np.argsort(eigvals)[::-1][:k]
    basis = eigvecs[:, order]
    basis = _fix_signs(basis)
    projected = x @ basis
    return ChannelStack(
        projected.reshape(stack.height, stack.width, k).astype(np.float32))


def _fix_signs(basis: np.ndarray) -> np.ndarray:
    flips = np.ones(basis.shape[1])
    for j in range(basis.shape[1]):
        i = int(np.argmax(np.abs(basis[:, j])))
        if basis[i, j] < 0:
            flips[j] = -1.0
    return basis * flips


@dataclass(frozen=True)
class BandWeights:
    """Per-output-channel band weights for RGB reconstruction (C -> 3)."""

    r: tuple
    g: tuple
    b: tuple

    def __post_init__(self):
        for name in ("r", "g", "b"):
            vec = tuple(float(v) for v in getattr(self, name))
            if not vec:
                raise ValueError(f"empty weight vector for {name}")
            if any(v < 0 for v in vec):
                raise ValueError(f"negative weight in {name}")
            if abs(sum(vec) - 1.0) > 1e-6:
                raise ValueError(f"weights for {name} must sum to 1, got {sum(vec)}")
            object.__setattr__(self, name, vec)
        if not len(self.r) == len(self.g) == len(self.b):
            raise ValueError("weight vectors must share the channel count")

    @property
    def channels(self) -> int:
        return len(self.r)

    def as_matrix(self) -> np.ndarray:
        """(C, 3) weight matrix, output order R, G, B."""
        return np.stack(
            [np.asarray(self.r), np.asarray(self.g), np.asarray(self.b)], axis=1
        )

    def to_json(self) -> str:
        return json.dumps({"r": list(self.r), "g": list(self.g), "b": list(self.b)})

    @classmethod
    def from_json(cls, text: str) -> "BandWeights":
        raw = json.loads(text)
        return cls(r=tuple(raw["r"]), g=tuple(raw["g"]), b=tuple(raw["b"]))

    @classmethod
    def default(cls, channels: int) -> "BandWeights":
        """Equal-weight averages over contiguous band thirds.

        Band index is assumed to increase with wavelength, so the last third
        feeds R, the middle third G and the first third B. Needs C >= 3.
        """
        if channels < 3:
            raise ValueError(f"default weights need >= 3 channels, got {channels}")
        b1 = channels // 3
        b2 = (2 * channels) // 3
        spans = {"b": (0, b1), "g": (b1, b2), "r": (b2, channels)}
        vecs = {}
        for name, (lo, hi) in spans.items():
            vec = [0.0] * channels
            for i in range(lo, hi):
                vec[i] = 1.0 / (hi - lo)
            vecs[name] = tuple(vec)
        return cls(r=vecs["r"], g=vecs["g"], b=vecs["b"])


def rgb_reconstruct(stack: ChannelStack, weights: BandWeights | None = None) -> ChannelStack:
    """Collapse a C-channel stack to 3 channels by weighted band averages."""
    if weights is None:
        weights = BandWeights.default(stack.channels)
    if weights.channels != stack.channels:
        raise ValueError(
            f"weights cover {weights.channels} channels, stack has {stack.channels}")
    out = stack.data.astype(np.float64) @ weights.as_matrix()
    return ChannelStack(out.astype(np.float32))
