"""Deterministic random streams.

Every random draw in the toolkit comes from a Philox 4x64 counter-based
generator keyed directly with the seed; Gaussian variates are produced by
the Box-Muller transform applied to its uniform doubles.  Both pieces are
fully specified algorithms, so a given seed yields a bitwise-identical
stream on every platform.
"""
from __future__ import annotations

import hashlib

import numpy as np

from .errors import ValidationError

_U64 = 2**64


def derive_seed(seed: int, label: str) -> int:
    """Stable per-stage seed derived from a master seed and a stage label."""
    digest = hashlib.blake2b(f"{seed}:{label}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def uniform_stream(seed: int, n: int) -> np.ndarray:
    """``n`` doubles uniform on [0, 1) from a Philox generator keyed by seed."""
    if n < 0:
        raise ValidationError("stream length must be nonnegative")
    gen = np.random.Generator(np.random.Philox(key=seed % _U64))
    return gen.random(n)


def normal_stream(seed: int, n: int) -> np.ndarray:
    """``n`` standard-normal draws via Box-Muller on the uniform stream."""
    pairs = (max(n, 0) + 1) // 2
    u = uniform_stream(seed, 2 * pairs)
    u1 = 1.0 - u[0::2]  # shift to (0, 1] so the log stays finite
    u2 = u[1::2]
    radius = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(2 * pairs)
    z[0::2] = radius * np.cos(2.0 * np.pi * u2)
    z[1::2] = radius * np.sin(2.0 * np.pi * u2)
    return z[:n]
