import numpy as np
import pytest

from scribseg.core import ChannelStack
from scribseg.preprocess import (
    BandWeights,
    l1_normalize,
    pca_features,
    rgb_reconstruct,
)

from conftest import random_stack


# ---------------------------------------------------------------------------
# L1 normalization
# ---------------------------------------------------------------------------

def test_l1_simple_spectrum():
    stack = ChannelStack(np.array([[[2.0, 2.0]]], dtype=np.float32))
    out = l1_normalize(stack)
    assert out.data.ravel().tolist() == [0.5, 0.5]


def test_l1_zero_spectrum_passes_through():
    stack = ChannelStack(np.zeros((1, 1, 3), dtype=np.float32))
    out = l1_normalize(stack)
    assert out.data.ravel().tolist() == [0.0, 0.0, 0.0]


def test_l1_sums_to_one(rng):
    stack = random_stack(rng, 6, 7, 5)
    out = l1_normalize(stack)
    sums = np.abs(out.data.astype(np.float64)).sum(axis=2)
    nonzero = np.abs(stack.data).sum(axis=2) > 0
    assert np.allclose(sums[nonzero], 1.0, atol=1e-6)


def test_l1_idempotent(rng):
    stack = random_stack(rng, 5, 5, 4)
    once = l1_normalize(stack)
    twice = l1_normalize(once)
    assert np.allclose(once.data, twice.data, atol=1e-6)


# ---------------------------------------------------------------------------
# PCA features, checked against an independent Jacobi eigensolver
# ---------------------------------------------------------------------------

def _jacobi_eigh(a, sweeps=100, tol=1e-12):
    """Cyclic Jacobi rotations for a symmetric matrix; ascending eigenvalues."""
    a = a.copy().astype(np.float64)
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(sweeps):
        off = np.sqrt((a**2).sum() - (np.diag(a)**2).sum())
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < tol / (n * n):
                    continue
                theta = 0.5 * np.arctan2(2 * a[p, q], a[q, q] - a[p, p])
                c, s = np.cos(theta), np.sin(theta)
                rot = np.eye(n)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    order = np.argsort(np.diag(a))
    return np.diag(a)[order], v[:, order]


def _pca_oracle(stack, k):
    x = stack.data.reshape(-1, stack.channels).astype(np.float64)
    x = x - x.mean(axis=0)
    cov = (x.T @ x) / x.shape[0]
    eigvals, eigvecs = _jacobi_eigh(cov)
    basis = eigvecs[:, ::-1][:, :k]
    for j in range(k):
        i = int(np.argmax(np.abs(basis[:, j])))
        if basis[i, j] < 0:
            basis[:, j] = -basis[:, j]
    return (x @ basis).reshape(stack.height, stack.width, k)


def test_pca_matches_jacobi_oracle(rng):
    stack = random_stack(rng, 8, 8, 6)
    out = pca_features(stack, 3)
    expected = _pca_oracle(stack, 3)
    assert np.abs(out.data.astype(np.float64) - expected).max() < 1e-5


def test_pca_full_basis_preserves_distances(rng):
    stack = random_stack(rng, 6, 6, 4)
    out = pca_features(stack, 4)
    flat_in = stack.data.reshape(-1, 4).astype(np.float64)
    flat_out = out.data.reshape(-1, 4).astype(np.float64)
    idx = rng.integers(0, flat_in.shape[0], size=(30, 2))
    for i, j in idx:
        d_in = np.linalg.norm(flat_in[i] - flat_in[j])
        d_out = np.linalg.norm(flat_out[i] - flat_out[j])
        assert d_out == pytest.approx(d_in, rel=1e-4, abs=1e-6)


def test_pca_rank_one_stack(rng):
    base = rng.normal(size=4)
    coeffs = rng.normal(size=(5, 5, 1))
    stack = ChannelStack((coeffs * base).astype(np.float32))
    out = pca_features(stack, 1)
    # one component captures everything: residual variance of the complement
    full = pca_features(stack, 4)
    residual = full.data[:, :, 1:].astype(np.float64).var()
    assert residual < 1e-6
    assert out.data.astype(np.float64).var() > 0


def test_pca_variances_non_increasing(rng):
    stack = random_stack(rng, 10, 9, 6)
    out = pca_features(stack, 6)
    variances = out.data.reshape(-1, 6).astype(np.float64).var(axis=0)
    assert np.all(np.diff(variances) <= 1e-9)


def test_pca_k_out_of_range(rng):
    stack = random_stack(rng, 4, 4, 3)
    with pytest.raises(ValueError):
        pca_features(stack, 0)
    with pytest.raises(ValueError):
        pca_features(stack, 4)


# ---------------------------------------------------------------------------
# RGB reconstruction
# ---------------------------------------------------------------------------

def test_rgb_identity_weights(rng):
    stack = random_stack(rng, 4, 5, 3)
    weights = BandWeights(r=(1, 0, 0), g=(0, 1, 0), b=(0, 0, 1))
    out = rgb_reconstruct(stack, weights)
    assert np.array_equal(out.data, stack.data)


def test_rgb_constant_stack():
    stack = ChannelStack(np.full((3, 3, 6), 2.5, dtype=np.float32))
    out = rgb_reconstruct(stack)
    assert np.allclose(out.data, 2.5, atol=1e-6)


def test_rgb_default_thirds_c6(rng):
    # R averages the long-wavelength third, bands 4 and 5 for C = 6
    stack = random_stack(rng, 3, 4, 6)
    out = rgb_reconstruct(stack)
    data = stack.data.astype(np.float64)
    expected_r = data[:, :, 4:6].mean(axis=2)
    expected_g = data[:, :, 2:4].mean(axis=2)
    expected_b = data[:, :, 0:2].mean(axis=2)
    assert np.allclose(out.data[:, :, 0], expected_r, atol=1e-6)
    assert np.allclose(out.data[:, :, 1], expected_g, atol=1e-6)
    assert np.allclose(out.data[:, :, 2], expected_b, atol=1e-6)


def test_rgb_output_within_input_range(rng):
    stack = random_stack(rng, 5, 5, 7)
    out = rgb_reconstruct(stack)
    assert out.data.min() >= stack.data.min() - 1e-6
    assert out.data.max() <= stack.data.max() + 1e-6


def test_rgb_dimension_mismatch(rng):
    stack = random_stack(rng, 3, 3, 5)
    weights = BandWeights.default(6)
    with pytest.raises(ValueError):
        rgb_reconstruct(stack, weights)


def test_band_weights_validation():
    with pytest.raises(ValueError):
        BandWeights(r=(0.5, 0.4), g=(0.5, 0.5), b=(0.5, 0.5))  # sums to 0.9
    with pytest.raises(ValueError):
        BandWeights(r=(-0.5, 1.5), g=(0.5, 0.5), b=(0.5, 0.5))


def test_band_weights_json_round_trip():
    weights = BandWeights.default(8)
    back = BandWeights.from_json(weights.to_json())
    assert back == weights
