"""Secure sketch over a binary linear code.

Enrollment stores only the syndrome of the feature vector.  Authentication
syndrome-decodes the probe against the stored syndrome and accepts when the
probe lies within a normalized Hamming threshold of the recovered coset
member.  A two-factor variant sketches the permute-and-salt transform of the
biometric, so the syndrome alone carries no information about it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import cancelable
from .gf2 import (
    DEFAULT_ENUMERATION_CAP,
    LinearCode,
    bit_str,
    bits,
    enumerate_coset,
    min_distance_profile,
    syndrome_decode,
    unpack,
)


@dataclass(frozen=True)
class SketchSystem:
    code: LinearCode
    tau: float
    two_factor: bool = False

    def __post_init__(self):
        if not (0 <= self.tau < 0.5):
            raise ValueError("tau must lie in [0, 0.5)")

    @property
    def n(self) -> int:
        return self.code.n


@dataclass(frozen=True)
class SketchTemplate:
    syndrome: np.ndarray
    n: int

    @property
    def m(self) -> int:
        return len(self.syndrome)

    def to_json(self) -> str:
        return json.dumps({
            "arch": "sketch",
            "syndrome": bit_str(self.syndrome),
            "n": self.n,
            "m": self.m,
        })

    @classmethod
    def from_json(cls, text: str) -> "SketchTemplate":
        obj = json.loads(text)
        if obj.get("arch") != "sketch":
            raise ValueError("not a sketch template")
        return cls(syndrome=bits(obj["syndrome"], obj["m"]), n=int(obj["n"]))


@dataclass(frozen=True)
class AuthResult:
    accepted: bool
    distance: int
    decoded: np.ndarray


def _apply_key(system: SketchSystem, x, key):
    x = bits(x, system.n)
    if not system.two_factor:
        return x
    if key is None:
        raise ValueError("two-factor system requires a key")
    if key.kind != cancelable.PERMUTE_SALT:
        raise ValueError("two-factor sketch uses a permute_salt key")
    return cancelable.transform(key, x)


def enroll(system: SketchSystem, a,
           key: cancelable.TransformKey | None = None) -> SketchTemplate:
    x = _apply_key(system, a, key)
    return SketchTemplate(syndrome=system.code.syndrome(x), n=system.n)


def authenticate(system: SketchSystem, template: SketchTemplate, d,
                 key: cancelable.TransformKey | None = None,
                 cap: int = DEFAULT_ENUMERATION_CAP) -> AuthResult:
    """Decode the (transformed) probe against the stored syndrome and apply
    the threshold test."""
    y = _apply_key(system, d, key)
    decoded = syndrome_decode(system.code, y, template.syndrome, cap)
    dist = int(np.count_nonzero(decoded ^ y))
    return AuthResult(accepted=dist / system.n <= system.tau,
                      distance=dist, decoded=decoded)


def distance_profile(system: SketchSystem, template: SketchTemplate,
                     cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """Min Hamming distance from every 2^n probe (in packed-integer order)
    to the enrollment coset; the acceptance region at threshold tau is
    exactly {d : profile[d] / n <= tau}."""
    members = enumerate_coset(system.code, template.syndrome, cap)
    dist, _ = min_distance_profile(members, system.n)
    return dist


def acceptance_region(system: SketchSystem, template: SketchTemplate,
                      cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """Exact keyless acceptance set as a (count, n) bit matrix."""
    if 1 << system.n > cap:
        raise ValueError("2^n probes exceed enumeration cap")
    profile = distance_profile(system, template, cap)
    accepted = np.nonzero(profile / system.n <= system.tau)[0]
    return np.stack([unpack(int(i), system.n) for i in accepted]) \
        if len(accepted) else np.zeros((0, system.n), dtype=np.uint8)
