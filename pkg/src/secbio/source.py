"""Synthetic binary biometric sources.

Two generators: an intra/inter-user binary-symmetric-channel model (genuine
probes flip each enrollment bit with small probability p, impostor probes
with p' close to 0.5), and a toy minutia-map feature extractor that counts
points falling in random boxes of (x, y, angle) space and thresholds each
count at the corpus median.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import rng
from .gf2 import bits


@dataclass(frozen=True)
class BscUserModel:
    """Bit-flip model: genuine probes pass through a BSC(p), impostor
    probes through a BSC(p_prime)."""

    n: int
    p: float
    p_prime: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not (0 < self.p < 0.5):
            raise ValueError("p must lie in (0, 0.5)")
        if not (self.p < self.p_prime <= 0.5):
            raise ValueError("need p < p_prime <= 0.5")


def sample_enrollment(model: BscUserModel, index: int = 0) -> np.ndarray:
    """Fresh uniform n-bit enrollment vector; deterministic under the
    model seed and enrollment index."""
    g = rng.stream(model.seed, f"enroll/{index}")
    return g.integers(0, 2, size=model.n, dtype=np.uint8)


def sample_probe(model: BscUserModel, enrollment: np.ndarray,
                 same_user: bool, index: int = 0) -> np.ndarray:
    """Noisy reading of the enrollment: XOR with i.i.d. Bernoulli noise at
    the intra-user rate (genuine) or inter-user rate (impostor)."""
    enrollment = bits(enrollment, model.n)
    rate = model.p if same_user else model.p_prime
    g = rng.stream(model.seed, f"probe/{same_user}/{index}")
    noise = (g.random(model.n) < rate).astype(np.uint8)
    return enrollment ^ noise


@dataclass(frozen=True)
class MinutiaMap:
    """Point set in x-y-angle space; angles are reduced modulo the bound."""

    points: tuple
    bounds: tuple

    def __post_init__(self):
        xb, yb, tb = self.bounds
        pts = tuple(
            (float(x), float(y), float(t) % tb) for x, y, t in self.points
        )
        for x, y, _ in pts:
            if not (0 <= x <= xb and 0 <= y <= yb):
                raise ValueError(f"point ({x}, {y}) outside bounds")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "bounds", (float(xb), float(yb), float(tb)))


@dataclass(frozen=True)
class CuboidBank:
    """n axis-aligned boxes plus one count threshold per box."""

    cuboids: tuple  # ((x0,x1), (y0,y1), (t0,t1)) per entry
    thresholds: tuple

    def __post_init__(self):
        if len(self.cuboids) != len(self.thresholds):
            raise ValueError("one threshold per cuboid required")
        for (x0, x1), (y0, y1), (t0, t1) in self.cuboids:
            if x1 <= x0 or y1 <= y0 or t1 <= t0:
                raise ValueError("cuboids must have positive extent")

    @property
    def n(self) -> int:
        return len(self.cuboids)

    def to_json(self) -> str:
        return json.dumps({
            "cuboids": [list(map(list, c)) for c in self.cuboids],
            "thresholds": list(self.thresholds),
        })

    @classmethod
    def from_json(cls, text: str) -> "CuboidBank":
        obj = json.loads(text)
        return cls(
            cuboids=tuple(tuple(map(tuple, c)) for c in obj["cuboids"]),
            thresholds=tuple(obj["thresholds"]),
        )


def count_in_cuboid(map_: MinutiaMap, cuboid) -> int:
    (x0, x1), (y0, y1), (t0, t1) = cuboid
    return sum(
        1 for x, y, t in map_.points
        if x0 <= x <= x1 and y0 <= y <= y1 and t0 <= t <= t1
    )


def random_cuboids(bounds, n: int, seed: int, min_fraction: float = 0.1):
    """n uniform boxes within bounds, each side at least min_fraction of
    the corresponding bound."""
    g = rng.stream(seed, "cuboids")
    out = []
    for _ in range(n):
        box = []
        for bound in bounds:
            width = g.uniform(min_fraction * bound, bound)
            lo = g.uniform(0, bound - width)
            box.append((lo, lo + width))
        out.append(tuple(box))
    return tuple(out)


def calibrate_thresholds(corpus, cuboids) -> CuboidBank:
    """Per-cuboid threshold = median point count over the corpus (midpoint
    of the two central order statistics for even corpus size), so each
    feature bit splits the corpus as evenly as parity allows."""
    if not corpus:
        raise ValueError("corpus must be non-empty")
    thresholds = []
    for cuboid in cuboids:
        counts = [count_in_cuboid(m, cuboid) for m in corpus]
        thresholds.append(float(np.median(counts)))
    return CuboidBank(cuboids=tuple(cuboids), thresholds=tuple(thresholds))


def extract_features(map_: MinutiaMap, bank: CuboidBank) -> np.ndarray:
    """Bit i is 1 iff the point count in cuboid i reaches its threshold."""
    return np.array(
        [1 if count_in_cuboid(map_, c) >= t else 0
         for c, t in zip(bank.cuboids, bank.thresholds)],
        dtype=np.uint8,
    )


def load_corpus(text: str):
    """JSON corpus: [{"points": [[x,y,theta],...], "bounds": [X,Y,T]}, ...]."""
    return [
        MinutiaMap(points=tuple(map(tuple, entry["points"])),
                   bounds=tuple(entry["bounds"]))
        for entry in json.loads(text)
    ]
