"""Additively homomorphic (Paillier) encryption with the g = n + 1 variant.

Ciphertexts multiply to add plaintexts; raising a ciphertext to a scalar
multiplies its plaintext.  Signed plaintexts are represented by their
residues, split at modulus/2.  gmpy2 backs the modular arithmetic so that
512-bit-per-prime keys stay fast enough for protocol sweeps.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

import gmpy2


@dataclass(frozen=True)
class PublicKey:
    n: int
    n_sq: int

    @property
    def g(self) -> int:
        return self.n + 1

    def plaintext_bound(self) -> int:
        return self.n


@dataclass(frozen=True)
class Keypair:
    public: PublicKey
    lam: int  # (p-1)(q-1)
    mu: int   # lam^-1 mod n


def _random_prime(bits: int, rng: random.Random) -> int:
    if bits < 4:
        raise ValueError("prime_bits must be >= 4")
    while True:
        cand = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        p = int(gmpy2.next_prime(cand))
        if p.bit_length() == bits:
            return p


def keygen(prime_bits: int, seed: int | None = None) -> Keypair:
    """Keypair with two distinct prime_bits-bit primes; deterministic under
    a seed."""
    rng = random.Random(seed) if seed is not None else random.SystemRandom()
    p = _random_prime(prime_bits, rng)
    q = p
    while q == p:
        q = _random_prime(prime_bits, rng)
    n = p * q
    lam = (p - 1) * (q - 1)
    mu = int(gmpy2.invert(lam, n))
    return Keypair(public=PublicKey(n=n, n_sq=n * n), lam=lam, mu=mu)


def from_primes(p: int, q: int) -> Keypair:
    """Keypair from explicit primes; intended for tiny test keys."""
    if p == q:
        raise ValueError("primes must be distinct")
    if not (gmpy2.is_prime(p) and gmpy2.is_prime(q)):
        raise ValueError("p and q must be prime")
    n = p * q
    lam = (p - 1) * (q - 1)
    if gmpy2.gcd(n, lam) != 1:
        raise ValueError("n must be coprime to (p-1)(q-1)")
    return Keypair(public=PublicKey(n=n, n_sq=n * n),
                   lam=lam, mu=int(gmpy2.invert(lam, n)))


def keypair_to_json(keypair: Keypair) -> str:
    return json.dumps({
        "n": hex(keypair.public.n),
        "lam": hex(keypair.lam),
        "mu": hex(keypair.mu),
    })


def keypair_from_json(text: str) -> Keypair:
    obj = json.loads(text)
    n = int(obj["n"], 16)
    return Keypair(public=PublicKey(n=n, n_sq=n * n),
                   lam=int(obj["lam"], 16), mu=int(obj["mu"], 16))


def encrypt(pub: PublicKey, m: int, rng: random.Random | None = None) -> int:
    """E(m) = (1 + m n) r^n mod n^2 with r uniform in the units of n."""
    m = m % pub.n
    rng = rng or random.SystemRandom()
    while True:
        r = rng.randrange(1, pub.n)
        if gmpy2.gcd(r, pub.n) == 1:
            break
    return int((1 + m * pub.n) * gmpy2.powmod(r, pub.n, pub.n_sq) % pub.n_sq)


def decrypt(keypair: Keypair, c: int) -> int:
    pub = keypair.public
    if gmpy2.gcd(c, pub.n) != 1:
        raise ValueError("ciphertext not coprime to the modulus")
    u = int(gmpy2.powmod(c, keypair.lam, pub.n_sq))
    return (u - 1) // pub.n * keypair.mu % pub.n


def decrypt_signed(keypair: Keypair, c: int) -> int:
    """Decrypt, mapping residues at or above n/2 to negative values."""
    m = decrypt(keypair, c)
    return m - keypair.public.n if m >= keypair.public.n // 2 else m


def add(pub: PublicKey, c1: int, c2: int) -> int:
    return c1 * c2 % pub.n_sq


def scalar_mul(pub: PublicKey, c: int, k: int) -> int:
    """Ciphertext of k times the plaintext; negative k uses the
    modulus-complement exponent."""
    return int(gmpy2.powmod(c, k % pub.n, pub.n_sq))
