"""Canned configurations: the three-system worked example used throughout
the linkage-attack analysis, and a BSC n=16 demo system."""

from __future__ import annotations

import numpy as np

from . import rng as rng_mod
from .gf2 import LinearCode, bits, rank
from .multisys import Deployment
from .sketch import SketchSystem
from .source import BscUserModel

# the [4,2] worked example: three sketch systems over the same biometric
H1 = np.array([[1, 0, 1, 1],
               [0, 1, 1, 1]], dtype=np.uint8)
H2 = np.array([[1, 0, 1, 1],
               [0, 1, 0, 1]], dtype=np.uint8)
H3 = np.array([[1, 1, 1, 0],
               [1, 1, 0, 1]], dtype=np.uint8)
ENROLLMENT = bits("1011")


def sidebar_system(h=None, tau: float = 0.0) -> SketchSystem:
    return SketchSystem(code=LinearCode.from_h(H1 if h is None else h),
                        tau=tau)


def sidebar_deployment(h1=None) -> Deployment:
    systems = tuple(
        SketchSystem(code=LinearCode.from_h(h), tau=0.0)
        for h in ((H1 if h1 is None else h1), H2, H3)
    )
    return Deployment(systems=systems, enrollment=ENROLLMENT)


def random_code(n: int, m: int, seed: int) -> LinearCode:
    """Random full-row-rank m x n parity-check matrix."""
    g = rng_mod.stream(seed, f"random-code/{n}x{m}")
    while True:
        h = g.integers(0, 2, size=(m, n), dtype=np.uint8)
        if rank(h) == m:
            return LinearCode.from_h(h)


def bsc16_demo(seed: int = 0):
    """n=16 rate-1/2 sketch over the BSC source model."""
    model = BscUserModel(n=16, p=0.05, seed=seed)
    system = SketchSystem(code=random_code(16, 8, seed), tau=0.2)
    return model, system


PRESETS = {
    "sidebar-b": sidebar_deployment,
    "bsc16": bsc16_demo,
}
