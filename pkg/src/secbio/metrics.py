"""Performance measures: false-accept/false-reject rates, ROC and equal
error rate, information-theoretic privacy leakage, successful-attack rate
under side information, and storage accounting.

Exact paths enumerate the full probe or joint space (small n); Monte Carlo
estimators report their standard error.  Exact rate computations run on a
"decision profile": the per-probe decision statistic (min Hamming distance
to the acceptance structure) indexed by the packed probe integer.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import cancelable, commit as commit_mod, sketch as sketch_mod, smc
from .gf2 import bits, pack


@dataclass(frozen=True)
class AttackView:
    """Which pieces of the system the adversary has compromised."""

    knows_s: bool = False
    knows_k: bool = False
    knows_a: bool = False

    def label(self) -> str:
        parts = [name for name, flag in
                 (("S", self.knows_s), ("K", self.knows_k), ("A", self.knows_a))
                 if flag]
        return "+".join(parts) if parts else "none"


@dataclass(frozen=True)
class RocPoint:
    tau: float
    far: float
    frr: float


@dataclass
class MetricReport:
    roc: list = field(default_factory=list)
    eer: float | None = None
    eer_flag: str = ""
    sar: dict = field(default_factory=dict)
    leakage_bits: dict = field(default_factory=dict)
    storage_bits: int | None = None
    method: str = "exact"
    trials: int = 0
    stderr: float = 0.0

    def to_json(self) -> str:
        return json.dumps({
            "roc": [{"tau": p.tau, "far": p.far, "frr": p.frr}
                    for p in self.roc],
            "eer": self.eer,
            "eer_flag": self.eer_flag,
            "sar": self.sar,
            "leakage_bits": self.leakage_bits,
            "storage_bits": self.storage_bits,
            "method": self.method,
            "trials": self.trials,
            "stderr": self.stderr,
        }, indent=1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        sar_cols = sorted(self.sar)
        leak_cols = sorted(self.leakage_bits)
        writer = csv.writer(buf)
        writer.writerow(
            ["tau", "far", "frr"]
            + [f"sar_{c}" for c in sar_cols]
            + [f"leakage_{c}" for c in leak_cols]
            + ["storage_bits", "method", "trials", "stderr"]
        )
        for p in self.roc:
            writer.writerow(
                [p.tau, p.far, p.frr]
                + [self.sar[c] for c in sar_cols]
                + [self.leakage_bits[c] for c in leak_cols]
                + [self.storage_bits, self.method, self.trials, self.stderr]
            )
        return buf.getvalue()


# --- exact FAR / FRR from a decision profile --------------------------------

def accept_mask(dist: np.ndarray, n: int, tau: float,
                tie: np.ndarray | None = None) -> np.ndarray:
    mask = dist / n <= tau
    if tie is not None:
        mask &= ~tie
    return mask


def far_exact(mask: np.ndarray) -> float:
    """Fraction of uniform probes accepted (inter-user crossover 0.5 makes
    attack probes uniform regardless of the attacker's own biometric)."""
    return float(mask.mean())


def _noise_weights(n: int, p: float) -> np.ndarray:
    w = np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)
    return p ** w * (1 - p) ** (n - w)


def frr_exact(mask: np.ndarray, a, p: float) -> float:
    """Sum of Bernoulli(p)-noise-pattern probabilities that push the fixed
    enrollment out of the acceptance region."""
    n = int(round(math.log2(len(mask))))
    a_int = pack(bits(a, n)) if not isinstance(a, (int, np.integer)) else int(a)
    noise = np.arange(1 << n, dtype=np.uint64)
    probes = (noise ^ np.uint64(a_int)).astype(np.int64)
    return float(np.sum(_noise_weights(n, p)[~mask[probes]]))


def roc_exact(dist: np.ndarray, n: int, a, p: float, tau_grid,
              tie: np.ndarray | None = None) -> list[RocPoint]:
    points = []
    for tau in tau_grid:
        mask = accept_mask(dist, n, tau, tie)
        points.append(RocPoint(tau=float(tau), far=far_exact(mask),
                               frr=frr_exact(mask, a, p)))
    return points


def eer(points: list[RocPoint]) -> tuple[float, str]:
    """Equal error rate by linear interpolation between the grid points
    bracketing the sign change of FAR - FRR; flags an endpoint when the
    grid never crosses."""
    diffs = [p.far - p.frr for p in points]
    for i in range(len(points) - 1):
        d0, d1 = diffs[i], diffs[i + 1]
        if d0 == 0:
            return points[i].far, ""
        if d0 * d1 < 0:
            t = d0 / (d0 - d1)
            return points[i].far + t * (points[i + 1].far - points[i].far), ""
        if d1 == 0:
            return points[i + 1].far, ""
    end = points[0] if abs(diffs[0]) <= abs(diffs[-1]) else points[-1]
    return (end.far + end.frr) / 2, "no-crossing"


# --- Monte Carlo estimators --------------------------------------------------

def rate_mc(accept_fn, sampler, trials: int, rng) -> tuple[float, float]:
    """Estimate P(accept) over probes drawn from sampler(rng); returns
    (estimate, standard error)."""
    hits = sum(1 for _ in range(trials) if accept_fn(sampler(rng)))
    est = hits / trials
    return est, math.sqrt(max(est * (1 - est), 1e-12) / trials)


# --- privacy leakage ---------------------------------------------------------

def mutual_information_bits(joint: dict) -> float:
    """I(A;V) from a joint distribution {(a, v): probability}."""
    total = sum(joint.values())
    pa: dict = {}
    pv: dict = {}
    for (a, v), w in joint.items():
        pa[a] = pa.get(a, 0.0) + w
        pv[v] = pv.get(v, 0.0) + w

    def h(dist):
        return -sum(w / total * math.log2(w / total) for w in dist if w > 0)

    return h(pa.values()) + h(pv.values()) - h(joint.values())


def reconstruction_distortion(joint: dict, n: int) -> float:
    """Expected normalized Hamming distortion of the adversary's best guess
    of A given V.  The distortion is per-bit separable, so the optimal rule
    guesses each bit at its posterior mode."""
    total = sum(joint.values())
    # accumulate P(a_i = 1, v) and P(v)
    ones: dict = {}
    pv: dict = {}
    for (a, v), w in joint.items():
        avec = bits(int(a), n)
        pv[v] = pv.get(v, 0.0) + w
        acc = ones.setdefault(v, np.zeros(n))
        acc += w * avec
    dist = 0.0
    for v, weight in pv.items():
        dist += np.minimum(ones[v], weight - ones[v]).sum() / n
    return float(dist / total)


# --- joint-distribution builders (uniform A) ---------------------------------

def sketch_joint(code) -> dict:
    """(A, S) for the keyless sketch: S is a deterministic function of A."""
    joint = {}
    for a in range(1 << code.n):
        s = pack(code.syndrome(bits(a, code.n)))
        joint[(a, s)] = 1.0
    return joint


def two_factor_sketch_joint(code, permutation=None) -> dict:
    """(A, S) for the two-factor sketch with uniform salt; the permutation
    is fixed (leakage is salt-driven either way)."""
    n = code.n
    perm = list(permutation) if permutation is not None else list(range(n))
    joint: dict = {}
    for a in range(1 << n):
        avec = bits(a, n)[perm]
        for salt in range(1 << n):
            s = pack(code.syndrome(avec ^ bits(salt, n)))
            joint[(a, s)] = joint.get((a, s), 0.0) + 1.0
    return joint


def commit_joint(code) -> dict:
    """(A, S) for fuzzy commitment with uniform A and uniform message."""
    joint: dict = {}
    for a in range(1 << code.n):
        avec = bits(a, code.n)
        for z in range(1 << code.k):
            s = pack(code.encode(bits(z, code.k)) ^ avec)
            joint[(a, s)] = joint.get((a, s), 0.0) + 1.0
    return joint


def commit_secret_joint(code) -> dict:
    """(Z, S) for fuzzy commitment: the biometric acts as a one-time pad."""
    joint: dict = {}
    for a in range(1 << code.n):
        avec = bits(a, code.n)
        for z in range(1 << code.k):
            s = pack(code.encode(bits(z, code.k)) ^ avec)
            joint[(z, s)] = joint.get((z, s), 0.0) + 1.0
    return joint


def negation_joint(n: int) -> dict:
    """The distortion-versus-leakage counterexample: the adversary learns
    the unordered pair {A, bitwise complement of A}."""
    full = (1 << n) - 1
    joint: dict = {}
    for a in range(1 << n):
        pair = (min(a, a ^ full), max(a, a ^ full))
        joint[(a, pair)] = joint.get((a, pair), 0.0) + 1.0
    return joint


def salt_joint(n: int) -> dict:
    """(A, permuted-and-salted A) with uniform salt: V is uniform and
    independent of A."""
    joint: dict = {}
    for a in range(1 << n):
        for salt in range(1 << n):
            joint[(a, a ^ salt)] = joint.get((a, a ^ salt), 0.0) + 1.0
    return joint


# --- successful attack rate ---------------------------------------------------

def sar_exact(mask: np.ndarray, strategy) -> float:
    """Acceptance probability of an attack strategy given as
    [(probability, packed probe), ...]."""
    return float(sum(p for p, probe in strategy if mask[probe]))


def coset_strategy(members: np.ndarray) -> list:
    """Uniform choice over compromised-coset members."""
    ints = [int(pack(m)) for m in members]
    return [(1.0 / len(ints), i) for i in ints]


def uniform_strategy(n: int) -> list:
    return [(1.0 / (1 << n), i) for i in range(1 << n)]


# --- storage ------------------------------------------------------------------

def storage_bits(template, key=None) -> int:
    """Serialized payload bits of the stored data (and key, if any)."""
    if isinstance(template, sketch_mod.SketchTemplate):
        total = template.m
    elif isinstance(template, commit_mod.CommitTemplate):
        total = template.n
    elif isinstance(template, cancelable.CancelableTemplate):
        total = len(template.distorted)
    elif isinstance(template, smc.EncryptedTemplate):
        total = smc.template_storage_bits(template)
    else:
        raise TypeError(f"unknown template type {type(template).__name__}")
    if key is not None:
        total += key_storage_bits(key)
    return total


def key_storage_bits(key) -> int:
    if isinstance(key, cancelable.TransformKey):
        if key.kind == cancelable.PERMUTE_SALT:
            return key.n + math.ceil(math.log2(math.factorial(key.n)))
        return key.projection.size  # one sign bit per entry
    if hasattr(key, "lam"):  # homomorphic keypair
        return key.lam.bit_length() + key.mu.bit_length()
    raise TypeError(f"unknown key type {type(key).__name__}")
