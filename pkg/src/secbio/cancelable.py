"""Cancelable transforms: keyed, revocable distortions of binary feature
vectors, matched in the distorted domain.

Two kinds: permute-and-salt (a bit permutation followed by XOR with a secret
salt, an exact Hamming isometry) and sign-quantized random projection
(r rows of +/-1 weights applied to the +/-1 embedding of the vector).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import rng
from .gf2 import bits

PERMUTE_SALT = "permute_salt"
RANDOM_PROJECTION = "random_projection"


@dataclass(frozen=True)
class TransformKey:
    kind: str
    permutation: tuple = None
    salt: np.ndarray = None
    projection: np.ndarray = None

    def __post_init__(self):
        if self.kind == PERMUTE_SALT:
            perm = tuple(int(i) for i in self.permutation)
            if sorted(perm) != list(range(len(perm))):
                raise ValueError("permutation must be a bijection on 0..n-1")
            object.__setattr__(self, "permutation", perm)
            object.__setattr__(self, "salt", bits(self.salt, len(perm)))
        elif self.kind == RANDOM_PROJECTION:
            proj = np.asarray(self.projection, dtype=np.int64)
            if proj.ndim != 2 or proj.shape[0] > proj.shape[1]:
                raise ValueError("projection must be r x n with r <= n")
            if not np.all(np.abs(proj) == 1):
                raise ValueError("projection entries must be +/-1")
            object.__setattr__(self, "projection", proj)
        else:
            raise ValueError(f"unknown transform kind {self.kind!r}")

    @property
    def n(self) -> int:
        if self.kind == PERMUTE_SALT:
            return len(self.permutation)
        return self.projection.shape[1]

    @property
    def out_len(self) -> int:
        if self.kind == PERMUTE_SALT:
            return self.n
        return self.projection.shape[0]

    def to_json(self) -> str:
        obj = {"kind": self.kind}
        if self.kind == PERMUTE_SALT:
            obj["perm"] = list(self.permutation)
            obj["salt"] = "".join(str(int(b)) for b in self.salt)
        else:
            obj["proj"] = self.projection.tolist()
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text: str) -> "TransformKey":
        obj = json.loads(text)
        if obj["kind"] == PERMUTE_SALT:
            return cls(PERMUTE_SALT, permutation=tuple(obj["perm"]),
                       salt=bits(obj["salt"]))
        return cls(RANDOM_PROJECTION, projection=np.asarray(obj["proj"]))


@dataclass(frozen=True)
class CancelableTemplate:
    distorted: np.ndarray
    tau: float

    def to_json(self) -> str:
        return json.dumps({
            "arch": "cancelable",
            "bits": "".join(str(int(b)) for b in self.distorted),
            "tau": self.tau,
        })

    @classmethod
    def from_json(cls, text: str) -> "CancelableTemplate":
        obj = json.loads(text)
        if obj.get("arch") != "cancelable":
            raise ValueError("not a cancelable template")
        return cls(distorted=bits(obj["bits"]), tau=float(obj["tau"]))


def random_key(kind: str, n: int, seed: int, r: int | None = None,
               label: str = "key") -> TransformKey:
    g = rng.stream(seed, f"cancelable/{label}")
    if kind == PERMUTE_SALT:
        return TransformKey(
            PERMUTE_SALT,
            permutation=tuple(int(i) for i in g.permutation(n)),
            salt=g.integers(0, 2, size=n, dtype=np.uint8),
        )
    if kind == RANDOM_PROJECTION:
        r = n if r is None else r
        proj = g.integers(0, 2, size=(r, n), dtype=np.int64) * 2 - 1
        return TransformKey(RANDOM_PROJECTION, projection=proj)
    raise ValueError(f"unknown transform kind {kind!r}")


def revoke(old_key: TransformKey, seed: int, label: str = "revoked") -> TransformKey:
    """Fresh key of the same shape, independent of the old one."""
    r = None if old_key.kind == PERMUTE_SALT else old_key.out_len
    return random_key(old_key.kind, old_key.n, seed, r=r, label=label)


def transform(key: TransformKey, x) -> np.ndarray:
    x = bits(x, key.n)
    if key.kind == PERMUTE_SALT:
        return x[list(key.permutation)] ^ key.salt
    # sign quantization; a zero dot product maps to 1
    dots = key.projection @ (2 * x.astype(np.int64) - 1)
    return (dots >= 0).astype(np.uint8)


def enroll(key: TransformKey, a, tau: float) -> CancelableTemplate:
    if not (0 <= tau < 0.5):
        raise ValueError("tau must lie in [0, 0.5)")
    return CancelableTemplate(distorted=transform(key, a), tau=tau)


def authenticate(key_presented: TransformKey, template: CancelableTemplate, d):
    """Accept iff the distorted probe is within the normalized Hamming
    threshold of the stored distorted vector."""
    y = transform(key_presented, d)
    if len(y) != len(template.distorted):
        raise ValueError("transformed probe length does not match template")
    dist = int(np.count_nonzero(y ^ template.distorted))
    frac = dist / len(y)
    return frac <= template.tau, dist
