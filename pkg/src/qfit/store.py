"""Deterministic on-disk containers.

Datasets and checkpoints are written as ``.npz`` archives assembled by hand
so the zip member timestamps are fixed: identical content produces
byte-identical files, which the experiment pipeline relies on for its
idempotence contract.  Metadata rides along as a JSON string stored in a
0-d array under the key ``meta``.
"""

from __future__ import annotations

import hashlib
import io
import json
import zipfile

import numpy as np

_EPOCH = (1980, 1, 1, 0, 0, 0)


def save_bundle(path, meta, arrays):
    """Write arrays plus a JSON meta record as a deterministic npz file."""
    payload = dict(arrays)
    if "meta" in payload:
        raise ValueError("'meta' is a reserved array name")
    payload["meta"] = np.array(json.dumps(meta, sort_keys=True))
    with zipfile.ZipFile(path, "w", zipfile.ZIP_STORED) as zf:
        for name in sorted(payload):
            buf = io.BytesIO()
            np.lib.format.write_array(buf, np.asarray(payload[name]))
            zf.writestr(zipfile.ZipInfo(name + ".npy", date_time=_EPOCH), buf.getvalue())


def load_bundle(path):
    """Read back (meta, arrays) from a bundle written by :func:`save_bundle`."""
    with np.load(path, allow_pickle=False) as npz:
        arrays = {name: npz[name] for name in npz.files if name != "meta"}
        meta = json.loads(str(npz["meta"][()]))
    return meta, arrays


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(canonical_json(obj))


def config_hash(obj):
    """sha256 of the canonical JSON encoding of a config mapping."""
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def sha256_file(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
