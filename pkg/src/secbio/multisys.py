"""Linkage attacks across several sketch deployments of one biometric:
coset intersections, cross-system attack rates, cumulative leakage, and the
rank profile that exhibits the security/privacy tension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng as rng_mod
from .gf2 import (
    DEFAULT_ENUMERATION_CAP,
    bits,
    enumerate_coset,
    pack,
    rank,
)
from .sketch import SketchTemplate, authenticate, enroll


@dataclass(frozen=True)
class Deployment:
    """The same biometric enrolled at several sketch systems.  With
    enrollment_noise > 0 each device saw an independently corrupted copy."""

    systems: tuple
    enrollment: np.ndarray
    enrollment_noise: float = 0.0
    seed: int = 0

    def __post_init__(self):
        lengths = {s.code.n for s in self.systems}
        if len(lengths) != 1:
            raise ValueError("all systems must share the feature length")
        object.__setattr__(self, "systems", tuple(self.systems))
        object.__setattr__(self, "enrollment",
                           bits(self.enrollment, lengths.pop()))

    @property
    def n(self) -> int:
        return len(self.enrollment)

    def enrolled_vector(self, i: int) -> np.ndarray:
        if self.enrollment_noise == 0:
            return self.enrollment
        g = rng_mod.stream(self.seed, f"multisys/enroll-noise/{i}")
        noise = (g.random(self.n) < self.enrollment_noise).astype(np.uint8)
        return self.enrollment ^ noise

    def templates(self) -> list[SketchTemplate]:
        return [enroll(sys_, self.enrolled_vector(i))
                for i, sys_ in enumerate(self.systems)]


def _coset_ints(deployment: Deployment, i: int,
                cap: int = DEFAULT_ENUMERATION_CAP) -> set[int]:
    template = enroll(deployment.systems[i], deployment.enrolled_vector(i))
    members = enumerate_coset(deployment.systems[i].code, template.syndrome,
                              cap)
    return {int(pack(m)) for m in members}


def intersect_candidates(deployment: Deployment, compromised,
                         cap: int = DEFAULT_ENUMERATION_CAP) -> set[int]:
    """Exact intersection of the compromised systems' cosets (candidates
    for the enrollment vector); identical-enrollment mode only."""
    if deployment.enrollment_noise != 0:
        raise ValueError("coset intersection requires identical enrollments")
    compromised = list(compromised)
    if not compromised:
        return set(range(1 << deployment.n))
    out = _coset_ints(deployment, compromised[0], cap)
    for i in compromised[1:]:
        out &= _coset_ints(deployment, i, cap)
    return out


def cross_sar(deployment: Deployment, source: int, target: int,
              cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """Acceptance rate at the target system of an attacker replaying a
    uniform member of the source system's compromised coset (tau = 0:
    acceptance is exact coset membership)."""
    src = _coset_ints(deployment, source, cap)
    tgt = _coset_ints(deployment, target, cap)
    return len(src & tgt) / len(src)


def cumulative_leakage(deployment: Deployment, compromise_order,
                       cap: int = DEFAULT_ENUMERATION_CAP) -> list[float]:
    """Bits learned about a uniform enrollment after each compromise:
    n - log2(candidate set size) at every step."""
    out = []
    seen: list[int] = []
    for i in compromise_order:
        seen.append(i)
        candidates = intersect_candidates(deployment, seen, cap)
        out.append(deployment.n - math.log2(len(candidates)))
    return out


def dependence_profile(deployment: Deployment) -> dict:
    """GF(2) rank of the vertically stacked parity checks for every pair;
    higher rank means smaller coset intersection."""
    profile = {}
    for i, si in enumerate(deployment.systems):
        for j, sj in enumerate(deployment.systems):
            stacked = np.vstack([si.code.h, sj.code.h])
            profile[(i, j)] = rank(stacked)
    return profile


def cross_sar_mc(deployment: Deployment, source: int, target: int,
                 trials: int, seed: int = 0,
                 cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[float, float]:
    """Monte Carlo cross-system attack rate; works for noisy enrollments
    and nonzero thresholds where the exact coset argument does not apply."""
    g = rng_mod.stream(seed, f"multisys/mc/{source}->{target}")
    src_members = sorted(_coset_ints(deployment, source, cap))
    target_template = enroll(deployment.systems[target],
                             deployment.enrolled_vector(target))
    hits = 0
    for _ in range(trials):
        probe = bits(int(g.choice(src_members)), deployment.n)
        if authenticate(deployment.systems[target], target_template,
                        probe, cap=cap).accepted:
            hits += 1
    est = hits / trials
    return est, math.sqrt(max(est * (1 - est), 1e-12) / trials)
