"""GF(2) linear algebra: parity-check/generator matrices, syndromes, cosets,
and exact nearest-member decoding.

Vectors are numpy uint8 arrays of 0/1.  Bit strings pack to integers
MSB-first, so integer order coincides with lexicographic order of the
bit tuples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

DEFAULT_ENUMERATION_CAP = 1 << 20


class EnumerationCapExceeded(Exception):
    """Raised when an exact enumeration would exceed the configured cap."""


def bits(x, n: int | None = None) -> np.ndarray:
    """Coerce a bit string, iterable, or integer to a uint8 0/1 vector."""
    if isinstance(x, str):
        v = np.array([int(c) for c in x], dtype=np.uint8)
    elif isinstance(x, (int, np.integer)):
        if n is None:
            raise ValueError("integer input requires an explicit length")
        v = np.array([(x >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)
    else:
        v = np.asarray(x, dtype=np.uint8)
    if not np.all(v <= 1):
        raise ValueError("entries must be 0 or 1")
    if n is not None and len(v) != n:
        raise ValueError(f"expected length {n}, got {len(v)}")
    return v


def bit_str(v: np.ndarray) -> str:
    return "".join(str(int(b)) for b in v)


def pack(v: np.ndarray) -> int:
    """Bit vector -> integer, MSB first."""
    out = 0
    for b in v:
        out = (out << 1) | int(b)
    return out


def unpack(x: int, n: int) -> np.ndarray:
    return bits(int(x), n)


def pack_rows(m: np.ndarray) -> np.ndarray:
    """Rows of a 0/1 matrix -> int64 array (requires cols <= 62)."""
    rows, cols = m.shape
    if cols > 62:
        raise ValueError("packed representation limited to 62 columns")
    weights = (1 << np.arange(cols - 1, -1, -1)).astype(np.int64)
    return m.astype(np.int64) @ weights


def mat_vec(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Matrix-vector product over GF(2)."""
    m = np.asarray(m, dtype=np.uint8)
    if m.shape[1] != len(v):
        raise ValueError(f"dimension mismatch: {m.shape[1]} columns vs length {len(v)}")
    return (m.astype(np.int64) @ v.astype(np.int64)) % 2


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over GF(2); returns (rref, pivot columns)."""
    work = np.array(m, dtype=np.uint8, copy=True)
    rows, cols = work.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(work[r:, c])[0]
        if len(hits) == 0:
            continue
        pivot = r + hits[0]
        if pivot != r:
            work[[r, pivot]] = work[[pivot, r]]
        mask = work[:, c].astype(bool)
        mask[r] = False
        work[mask] ^= work[r]
        pivots.append(c)
        r += 1
    return work, pivots


def rank(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def null_space(h: np.ndarray) -> np.ndarray:
    """Basis of the null space of h, one row per free column of its RREF.

    Deterministic: free columns are processed in increasing order, and the
    basis vector for free column j has a 1 at j and the RREF column entries
    at the pivot positions.
    """
    h = np.asarray(h, dtype=np.uint8)
    m, n = h.shape
    red, pivots = rref(h)
    free = [c for c in range(n) if c not in pivots]
    g = np.zeros((len(free), n), dtype=np.uint8)
    for i, j in enumerate(free):
        g[i, j] = 1
        for r, pc in enumerate(pivots):
            g[i, pc] = red[r, j]
    return g


def solve(h: np.ndarray, s: np.ndarray) -> np.ndarray | None:
    """One particular solution of h @ x = s over GF(2), or None."""
    h = np.asarray(h, dtype=np.uint8)
    m, n = h.shape
    aug = np.hstack([h, bits(s, m).reshape(-1, 1)])
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for r, pc in enumerate(pivots):
        x[pc] = red[r, n]
    return x


@dataclass(frozen=True)
class LinearCode:
    """A binary [n, k] code given by a full-row-rank m x n parity-check matrix."""

    h: np.ndarray
    g: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        h = np.asarray(self.h, dtype=np.uint8)
        if h.ndim != 2:
            raise ValueError("parity-check matrix must be 2-D")
        if rank(h) != h.shape[0]:
            raise ValueError("parity-check matrix must have full row rank")
        object.__setattr__(self, "h", h)
        if self.g is None:
            object.__setattr__(self, "g", null_space(h))
        else:
            g = np.asarray(self.g, dtype=np.uint8)
            if g.shape != (self.k, self.n):
                raise ValueError("generator has wrong shape")
            if g.size and np.any((h.astype(np.int64) @ g.T.astype(np.int64)) % 2):
                raise ValueError("generator rows must lie in the null space of h")
            if g.size and rank(g) != self.k:
                raise ValueError("generator must have full row rank")
            object.__setattr__(self, "g", g)

    @property
    def n(self) -> int:
        return self.h.shape[1]

    @property
    def m(self) -> int:
        return self.h.shape[0]

    @property
    def k(self) -> int:
        return self.n - self.m

    @classmethod
    def from_h(cls, h) -> "LinearCode":
        return cls(np.asarray(h, dtype=np.uint8))

    @classmethod
    def from_json(cls, text: str) -> "LinearCode":
        obj = json.loads(text)
        h = np.asarray(obj["bits"], dtype=np.uint8)
        if h.shape != (obj["rows"], obj["cols"]):
            raise ValueError("declared dimensions do not match bits")
        return cls.from_h(h)

    @classmethod
    def from_text(cls, text: str) -> "LinearCode":
        """Plain-text format: one row of 0/1 characters per line."""
        rows = [line.strip() for line in text.splitlines() if line.strip()]
        return cls.from_h([[int(c) for c in row] for row in rows])

    def to_json(self) -> str:
        return json.dumps(
            {"rows": self.m, "cols": self.n, "bits": self.h.tolist()}
        )

    def syndrome(self, x) -> np.ndarray:
        return mat_vec(self.h, bits(x, self.n))

    def codewords(self, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
        """All 2^k codewords as a (2^k, n) array, in message order."""
        if 1 << self.k > cap:
            raise EnumerationCapExceeded(f"2^{self.k} codewords exceed cap {cap}")
        msgs = messages(self.k)
        if self.k == 0:
            return np.zeros((1, self.n), dtype=np.uint8)
        return (msgs.astype(np.int64) @ self.g.astype(np.int64) % 2).astype(np.uint8)

    def encode(self, z) -> np.ndarray:
        """G^T z: codeword for message z."""
        z = bits(z, self.k)
        if self.k == 0:
            return np.zeros(self.n, dtype=np.uint8)
        return mat_vec(self.g.T, z)


def messages(k: int) -> np.ndarray:
    """All k-bit messages as a (2^k, k) array in integer order."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    ints = np.arange(1 << k, dtype=np.int64)
    return ((ints[:, None] >> np.arange(k - 1, -1, -1)) & 1).astype(np.uint8)


def enumerate_coset(code: LinearCode, syndrome,
                    cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """All 2^(n-m) solutions of H x = s, lexicographically sorted."""
    if 1 << code.k > cap:
        raise EnumerationCapExceeded(f"coset of size 2^{code.k} exceeds cap {cap}")
    x0 = solve(code.h, bits(syndrome, code.m))
    if x0 is None:
        raise ValueError("syndrome not in the image of H")
    members = code.codewords(cap) ^ x0
    order = np.argsort(pack_rows(members))
    return members[order]


def syndrome_decode(code: LinearCode, probe, syndrome,
                    cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """Coset member nearest to the probe; ties go to the lexicographically
    smallest member."""
    probe = bits(probe, code.n)
    members = enumerate_coset(code, syndrome, cap)
    dists = np.count_nonzero(members ^ probe, axis=1)
    return members[int(np.argmin(dists))]  # members sorted, argmin takes first


def min_distance_profile(targets: np.ndarray, n: int,
                         probes: np.ndarray | None = None
                         ) -> tuple[np.ndarray, np.ndarray]:
    """Min Hamming distance from each probe to a target set, plus the number
    of targets achieving it.

    targets: (t, n) bit matrix.  probes: int64 array of packed probes
    (default: all 2^n).  Returns (min_dist, multiplicity) int arrays.
    """
    t_ints = pack_rows(targets).astype(np.uint64)
    if probes is None:
        probes = np.arange(1 << n, dtype=np.uint64)
    else:
        probes = np.asarray(probes, dtype=np.uint64)
    best = np.full(len(probes), n + 1, dtype=np.int64)
    mult = np.zeros(len(probes), dtype=np.int64)
    chunk = max(1, (1 << 22) // max(1, len(t_ints)))
    for lo in range(0, len(probes), chunk):
        seg = probes[lo:lo + chunk]
        d = np.bitwise_count(seg[:, None] ^ t_ints[None, :]).astype(np.int64)
        best[lo:lo + chunk] = d.min(axis=1)
        mult[lo:lo + chunk] = (d == d.min(axis=1, keepdims=True)).sum(axis=1)
    return best, mult
