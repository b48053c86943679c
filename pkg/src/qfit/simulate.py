"""Rician-noise signal simulation and background-based sigma estimation.

Ground-truth parameters are drawn uniformly from 10-point equidistant grids
over the physiological ranges; noise-free signals from the forward model
get independent complex Gaussian noise per measurement before the magnitude
is taken.  The dataset-level noise convention is sigma = 1/SNR with a
reference b=0 amplitude of 1 a.u. (the centre of the S0 range), since a
single sigma per dataset is what the likelihood loss assumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import store
from ._streams import BACKGROUND, NOISE, TRUTH, substream
from .sigmodels import ModelKind, PARAM_RANGES, Protocol, model_signals

__all__ = [
    "GRID_POINTS",
    "VoxelDataset",
    "param_grid",
    "sample_param_grid",
    "add_rician_noise",
    "make_dataset",
    "make_background",
    "estimate_sigma",
    "save_dataset",
    "load_dataset",
]

GRID_POINTS = 10

_SQRT_HALF_PI = math.sqrt(math.pi / 2.0)


@dataclass(eq=False)
class VoxelDataset:
    """Simulated magnitude signals with their generating ground truth."""

    signals: np.ndarray  # (N, Nz), a.u.
    truth: np.ndarray  # (N, P)
    protocol: Protocol
    snr: float
    sigma_true: float
    sigma_estimated: float | None
    seed: int

    def __post_init__(self):
        if self.signals.shape[0] != self.truth.shape[0]:
            raise ValueError("signals and truth row counts differ")
        if self.signals.shape[1] != self.protocol.n_measurements:
            raise ValueError("signal width does not match protocol")

    @property
    def n_voxels(self):
        return self.signals.shape[0]

    def sigma(self, source="estimated"):
        """Noise sd to feed the likelihood loss: 'true' or 'estimated'."""
        if source == "true":
            return self.sigma_true
        if source == "estimated":
            if self.sigma_estimated is None:
                raise ValueError("dataset carries no sigma estimate")
            return self.sigma_estimated
        raise ValueError(f"unknown sigma source {source!r}")


def param_grid(model_kind):
    """Per-parameter sampling grids: 10 equidistant values incl. endpoints."""
    model_kind = ModelKind(model_kind)
    return {
        name: np.linspace(lo, hi, GRID_POINTS)
        for name, (lo, hi) in PARAM_RANGES[model_kind].items()
    }


def sample_param_grid(model_kind, n_voxels, seed):
    """Draw ground-truth parameter vectors uniformly from the grids.

    Returns an ``(n_voxels, P)`` matrix in the model's column order;
    deterministic in ``seed``.
    """
    model_kind = ModelKind(model_kind)
    if n_voxels < 1:
        raise ValueError(f"n_voxels must be >= 1, got {n_voxels}")
    grids = param_grid(model_kind)
    rng = substream(seed, TRUTH)
    idx = rng.integers(0, GRID_POINTS, size=(n_voxels, model_kind.n_params))
    cols = [grids[name][idx[:, j]] for j, name in enumerate(model_kind.param_names)]
    return np.column_stack(cols)


def add_rician_noise(A, sigma, rng):
    """Magnitude of ``A`` corrupted by complex Gaussian noise of sd ``sigma``.

    Returns sqrt((A + n_R)^2 + n_I^2) with n_R, n_I independent N(0, sigma^2)
    draws from ``rng``; sigma = 0 reproduces A exactly.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    a = np.asarray(A, dtype=np.float64)
    if np.any(a < 0):
        raise ValueError("noise-free signal must be non-negative")
    noise = rng.standard_normal((2,) + a.shape) * sigma
    out = np.sqrt((a + noise[0]) ** 2 + noise[1] ** 2)
    if np.isscalar(A):
        return float(out)
    return out


def make_dataset(model_kind, snr, n_voxels, protocol, seed):
    """Simulate a full dataset at one SNR; deterministic in ``seed``.

    Noise uses one RNG substream per voxel (seed + voxel index), so
    generation order and batching cannot change the data.
    """
    model_kind = ModelKind(model_kind)
    if snr <= 0:
        raise ValueError(f"snr must be positive, got {snr}")
    if protocol.model_kind is not model_kind:
        raise ValueError("protocol model kind does not match requested model")
    sigma = 1.0 / snr
    truth = sample_param_grid(model_kind, n_voxels, seed)
    clean = model_signals(truth, protocol)
    signals = np.empty_like(clean)
    for i in range(n_voxels):
        signals[i] = add_rician_noise(clean[i], sigma, substream(seed, NOISE, i))
    return VoxelDataset(
        signals=signals,
        truth=truth,
        protocol=protocol,
        snr=float(snr),
        sigma_true=sigma,
        sigma_estimated=None,
        seed=int(seed),
    )


def make_background(sigma, n_bg=10000, seed=0):
    """Rayleigh background voxels (zero signal) for sigma estimation."""
    if n_bg < 1:
        raise ValueError(f"n_bg must be >= 1, got {n_bg}")
    rng = substream(seed, BACKGROUND)
    return add_rician_noise(np.zeros(n_bg), sigma, rng)


def estimate_sigma(background):
    """Unbiased noise-sd estimate from background magnitudes.

    The background is Rayleigh with mean sigma * sqrt(pi/2), so the sample
    mean divided by sqrt(pi/2) estimates sigma.
    """
    bg = np.asarray(background, dtype=np.float64)
    if bg.size == 0:
        raise ValueError("background is empty")
    if np.any(bg <= 0):
        raise ValueError("background magnitudes must be positive")
    return float(bg.mean() / _SQRT_HALF_PI)


def save_dataset(dataset, path):
    """Persist a dataset as a deterministic npz bundle."""
    meta = {
        "kind": "dataset",
        "model_kind": dataset.protocol.model_kind.value,
        "b_values": dataset.protocol.b_values.tolist(),
        "param_names": list(dataset.protocol.model_kind.param_names),
        "snr": dataset.snr,
        "sigma_true": dataset.sigma_true,
        "sigma_estimated": dataset.sigma_estimated,
        "seed": dataset.seed,
    }
    store.save_bundle(path, meta, {"signals": dataset.signals, "truth": dataset.truth})


def load_dataset(path):
    meta, arrays = store.load_bundle(path)
    if meta.get("kind") != "dataset":
        raise ValueError(f"{path} is not a dataset bundle")
    protocol = Protocol(np.array(meta["b_values"]), ModelKind(meta["model_kind"]))
    return VoxelDataset(
        signals=arrays["signals"],
        truth=arrays["truth"],
        protocol=protocol,
        snr=meta["snr"],
        sigma_true=meta["sigma_true"],
        sigma_estimated=meta["sigma_estimated"],
        seed=meta["seed"],
    )
