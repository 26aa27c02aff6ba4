"""Deterministic random number streams.

Every random quantity in the library is drawn from a counter-based Philox
generator whose 128-bit key is derived by hashing a root seed together with
a sequence of string labels (stage name, cluster index, ...).  Streams for
different labels are independent, and the same (seed, labels) pair always
yields the same bits regardless of the order in which streams are consumed.
That is what makes parallel generation order-independent and every run
reproducible bit for bit.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_key(root_seed: int, *labels) -> np.ndarray:
    """128-bit Philox key from a root seed and a label path."""
    h = hashlib.sha256()
    h.update(str(int(root_seed)).encode())
    for lab in labels:
        h.update(b"/")
        h.update(str(lab).encode())
    return np.frombuffer(h.digest()[:16], dtype=np.uint64).copy()


def derive_seed(root_seed: int, *labels) -> int:
    """63-bit integer sub-seed for a labeled stage."""
    h = hashlib.sha256()
    h.update(str(int(root_seed)).encode())
    for lab in labels:
        h.update(b"/")
        h.update(str(lab).encode())
    return int.from_bytes(h.digest()[16:24], "little") >> 1


def generator(root_seed: int, *labels) -> np.random.Generator:
    """Independent generator for the given seed and label path."""
    return np.random.Generator(np.random.Philox(key=derive_key(root_seed, *labels)))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Zero-mean circular complex Gaussian with unit variance, CN(0, 1)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
