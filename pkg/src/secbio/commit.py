"""Fuzzy commitment: bind a uniform secret message to the biometric by
masking one of its codewords, and authenticate by recovering the message.

Stored data is the n-bit vector S = G^T z XOR a.  Opening XORs the probe
into S, yielding a noisy codeword, and nearest-codeword decodes it; a
decoding tie rejects, and acceptance additionally requires the residual
noise to fall under the normalized threshold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import rng
from .gf2 import (
    DEFAULT_ENUMERATION_CAP,
    LinearCode,
    bit_str,
    bits,
    min_distance_profile,
    pack,
)


@dataclass(frozen=True)
class CommitTemplate:
    bound: np.ndarray

    @property
    def n(self) -> int:
        return len(self.bound)

    def to_json(self) -> str:
        return json.dumps({"arch": "commit", "bound": bit_str(self.bound)})

    @classmethod
    def from_json(cls, text: str) -> "CommitTemplate":
        obj = json.loads(text)
        if obj.get("arch") != "commit":
            raise ValueError("not a commitment template")
        return cls(bound=bits(obj["bound"]))


@dataclass(frozen=True)
class OpenResult:
    accepted: bool
    message: np.ndarray | None
    distance: int
    tied: bool


def sample_message(code: LinearCode, seed: int, label: str = "z") -> np.ndarray:
    g = rng.stream(seed, f"commit/{label}")
    return g.integers(0, 2, size=code.k, dtype=np.uint8)


def commit(code: LinearCode, a, z) -> CommitTemplate:
    a = bits(a, code.n)
    return CommitTemplate(bound=code.encode(z) ^ a)


def open_commitment(code: LinearCode, template: CommitTemplate, d,
                    tau: float,
                    cap: int = DEFAULT_ENUMERATION_CAP) -> OpenResult:
    """Recover the bound message from a probe; reject on decoding ties."""
    d = bits(d, code.n)
    y = template.bound ^ d
    words = code.codewords(cap)
    dists = np.count_nonzero(words ^ y, axis=1)
    best = int(dists.min())
    hits = np.nonzero(dists == best)[0]
    tied = len(hits) > 1
    if tied or best / code.n > tau:
        return OpenResult(accepted=False, message=None, distance=best,
                          tied=tied)
    # codewords() is in message order, so the row index is the message
    z_hat = bits(int(hits[0]), code.k)
    return OpenResult(accepted=True, message=z_hat, distance=best, tied=tied)


def decision_profile(code: LinearCode, template: CommitTemplate,
                     cap: int = DEFAULT_ENUMERATION_CAP):
    """(min codeword distance, tie flag) for every 2^n probe in
    packed-integer order.  Probe d is accepted at threshold tau iff
    dist[d]/n <= tau and not tie[d]."""
    words = code.codewords(cap)
    # distance from y = S^d to the codeword set; reindex by probe
    s_int = pack(template.bound)
    probes = np.arange(1 << code.n, dtype=np.uint64) ^ np.uint64(s_int)
    dist, mult = min_distance_profile(words, code.n, probes)
    return dist, mult > 1


def storage_bits(template: CommitTemplate) -> int:
    return template.n
