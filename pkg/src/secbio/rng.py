"""Reproducible per-operation random streams.

Each (seed, label) pair yields an independent numpy Generator, so concurrent
operations never share stream state.
"""

from __future__ import annotations

import zlib

import numpy as np


def stream(seed: int, label: str) -> np.random.Generator:
    """Independent generator for one named operation under a master seed."""
    tag = zlib.crc32(label.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([int(seed), tag]))
