"""Reproducible sampling, random instances and brute-force oracles.

Randomness comes from a self-contained xorshift64* generator seeded through
SplitMix64, so every sample set and random instance is bit-reproducible
across platforms and numpy versions.

Generator definition (all arithmetic modulo 2**64)::

    seeding   z = seed + 0x9E3779B97F4A7C15
              z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
              z = (z ^ (z >> 27)) * 0x94D049BB133111EB
              state = z ^ (z >> 31)          (replaced by 1 if zero)
    step      x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27
              output = x * 0x2545F4914F6CDD1D

Test vectors (first three outputs)::

    seed 0   0x7BBCB40D550682D0  0xDE7FE413D00CC9FD  0xB3C638353C668C91
    seed 1   0x4B46A55DF3611B9B  0xD7E1F1410E763EF4  0x5F14EC66975F9B06

The seeding step for seed 0 gives 0xE220A8397B1DCDAF, the reference first
output of SplitMix64.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import ndtri

from .geometry import MalformedInputError
from .phfunc import DCPair, MaxOfLinear, SaddleFamily, eval_infsup

__all__ = [
    "XorShift64Star",
    "SphereSampler",
    "Extrema",
    "sample_sphere",
    "random_dc",
    "random_family",
    "brute_force_extrema",
]

_MASK = (1 << 64) - 1


def _splitmix64(seed: int) -> int:
    z = (seed + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class XorShift64Star:
    """Marsaglia xorshift with a multiplicative output scrambler (Vigna)."""

    def __init__(self, seed: int = 0):
        self.state = _splitmix64(int(seed) & _MASK) or 1

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, low: float, high: float, size: int) -> np.ndarray:
        return np.array([low + (high - low) * self.random() for _ in range(size)])

    def below(self, k: int) -> int:
        """Integer in ``range(k)`` (multiply-shift, bias below 2**-53 for small k)."""
        return min(int(self.random() * k), k - 1)

    def normals(self, size: int) -> np.ndarray:
        """Standard normal draws by the Box-Muller transform."""
        out = np.empty(size)
        for k in range(0, size, 2):
            u1 = 1.0 - self.random()
            u2 = self.random()
            r = math.sqrt(-2.0 * math.log(u1))
            out[k] = r * math.cos(2.0 * math.pi * u2)
            if k + 1 < size:
                out[k + 1] = r * math.sin(2.0 * math.pi * u2)
        return out


_SCHEMES = ("uniform", "low-discrepancy", "angular-grid")


@dataclass(frozen=True)
class SphereSampler:
    """Deterministic recipe for a finite set of unit vectors."""

    dim: int
    count: int
    seed: int = 0
    scheme: str = "uniform"

    def __post_init__(self):
        if self.dim < 1 or self.count < 1:
            raise MalformedInputError(f"sampler needs dim >= 1 and count >= 1, got {self.dim}, {self.count}")
        if self.scheme not in _SCHEMES:
            raise MalformedInputError(f"unknown sampling scheme {self.scheme!r}; choose from {_SCHEMES}")
        if self.scheme == "angular-grid" and self.dim != 2:
            raise MalformedInputError("angular-grid sampling is only defined for dim == 2")

    def points(self) -> np.ndarray:
        return sample_sphere(self)


def _primes(k: int) -> list[int]:
    out: list[int] = []
    c = 2
    while len(out) < k:
        if all(c % p for p in out if p * p <= c):
            out.append(c)
        c += 1
    return out


def _halton(count: int, dim: int, shift: np.ndarray) -> np.ndarray:
    H = np.empty((count, dim))
    idx = np.arange(1, count + 1)
    for j, base in enumerate(_primes(dim)):
        f = np.ones(count)
        r = np.zeros(count)
        i = idx.copy()
        while np.any(i > 0):
            f = f / base
            r = r + f * (i % base)
            i = i // base
        H[:, j] = r
    return np.mod(H + shift, 1.0)


@lru_cache(maxsize=64)
def _sample_cached(s: SphereSampler) -> np.ndarray:
    n, k = s.dim, s.count
    if s.scheme == "angular-grid":
        theta = 2.0 * np.pi * np.arange(k) / k
        X = np.column_stack([np.cos(theta), np.sin(theta)])
    elif s.scheme == "uniform":
        rng = XorShift64Star(s.seed)
        X = rng.normals(k * n).reshape(k, n)
    else:
        rng = XorShift64Star(s.seed)
        U = _halton(k, n, rng.uniform(0.0, 1.0, n))
        X = ndtri(np.clip(U, 1e-12, 1 - 1e-12))
    norms = np.linalg.norm(X, axis=1)
    # zero rows are practically impossible; replace them with the first axis
    bad = norms == 0
    X[bad] = 0.0
    X[bad, 0] = 1.0
    norms[bad] = 1.0
    X = X / norms[:, None]
    X.setflags(write=False)
    return X


def sample_sphere(sampler: SphereSampler) -> np.ndarray:
    """Unit vectors described by ``sampler``, as a read-only ``(count, dim)`` array."""
    return _sample_cached(sampler)


def random_dc(seed: int, n: int, max_plus: int, max_minus: int, coord_bound: float) -> DCPair:
    """Random DC pair; part sizes uniform in ``1..max_*``, coordinates in ``[-bound, bound]``."""
    if n < 1 or max_plus < 1 or max_minus < 1 or not coord_bound > 0:
        raise MalformedInputError("random_dc needs n, max_plus, max_minus >= 1 and coord_bound > 0")
    rng = XorShift64Star(seed)
    kp = 1 + rng.below(max_plus)
    km = 1 + rng.below(max_minus)
    plus = rng.uniform(-coord_bound, coord_bound, kp * n).reshape(kp, n)
    minus = rng.uniform(-coord_bound, coord_bound, km * n).reshape(km, n)
    return DCPair(MaxOfLinear(plus), MaxOfLinear(minus))


def random_family(seed: int, n: int, rows: int, cols: int, coord_bound: float = 1.0) -> SaddleFamily:
    """Arbitrary (generally non-saddle) family with uniform entries."""
    rng = XorShift64Star(seed)
    E = rng.uniform(-coord_bound, coord_bound, rows * cols * n).reshape(rows, cols, n)
    return SaddleFamily(E)


@dataclass(frozen=True)
class Extrema:
    min_point: np.ndarray
    min_value: float
    max_point: np.ndarray
    max_value: float


def brute_force_extrema(F: SaddleFamily, sampler: SphereSampler) -> Extrema:
    """Exhaustive min and max of the inf-sup reading over the sample set."""
    if sampler.dim != F.dim:
        raise MalformedInputError(f"sampler dimension {sampler.dim} != family dimension {F.dim}")
    X = sample_sphere(sampler)
    vals = eval_infsup(F, X)
    lo, hi = int(np.argmin(vals)), int(np.argmax(vals))
    return Extrema(X[lo].copy(), float(vals[lo]), X[hi].copy(), float(vals[hi]))
