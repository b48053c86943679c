"""Deterministic RNG substreams derived from a master seed.

Every random draw in the package comes from a Philox generator keyed by
``SeedSequence(entropy=seed, spawn_key=(namespace, index...))``.  This gives
independent, reproducible streams per purpose and per voxel, so dataset
generation stays deterministic no matter how calls are batched or
parallelised.

Namespaces:

======================  ==========================================
``NOISE, voxel_index``  measurement noise for one simulated voxel
``TRUTH``               ground-truth parameter sampling
``BACKGROUND``          background (Rayleigh) voxels
``NET_INIT``            network weight/bias initialization
``SHUFFLE``             epoch shuffling during training
``INIT_REP, rep``       seed derivation for init repetitions
======================  ==========================================
"""

from __future__ import annotations

import numpy as np

NOISE = 0
TRUTH = 1
BACKGROUND = 2
NET_INIT = 3
SHUFFLE = 4
INIT_REP = 5


def substream(seed, *key):
    """Return a Generator for the substream (namespace, index...) of ``seed``."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed, *key):
    """Derive a child integer seed from ``seed`` for the given key path."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])
