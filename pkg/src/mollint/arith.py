"""Exact integer arithmetic on top of a smallest-prime-factor sieve.

Provides mu(n), phi(n), Lambda(n) and gcd/lcm, which underpin all the
quadratic-form computations.  The sieve is linear-time and immutable
after construction; every query factors n in O(log n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Refuse sieves that would need more than ~4 GB of spf entries.
MAX_SIEVE_LIMIT = 500_000_000

# Euler-Mascheroni constant, full double precision.
EULER_GAMMA = 0.57721566490153286


class SieveSizeError(ValueError):
    """Requested sieve limit is out of the supported range."""


class OutOfSieveRange(ValueError):
    """Query argument exceeds the sieve limit."""


@dataclass(frozen=True)
class FactorSieve:
    """Smallest-prime-factor table for 2..limit.

    ``spf[n]`` is the least prime dividing n; ``spf[p] == p`` exactly for
    primes.  Index 0 and 1 are unused (set to 0 and 1).
    """

    limit: int
    spf: np.ndarray = field(repr=False)

    def check(self, n: int) -> None:
        if not 1 <= n <= self.limit:
            raise OutOfSieveRange(f"n={n} outside sieve range [1, {self.limit}]")

    def factorize(self, n: int) -> list[tuple[int, int]]:
        """Prime factorization of n as a list of (p, exponent) pairs."""
        self.check(n)
        out: list[tuple[int, int]] = []
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        return out

    def primes(self) -> np.ndarray:
        """All primes up to the sieve limit, ascending."""
        idx = np.arange(2, self.limit + 1)
        return idx[self.spf[2:] == idx]


def sieve_build(limit: int) -> FactorSieve:
    """Build the smallest-prime-factor sieve for 2..limit (linear sieve)."""
    if limit < 2:
        raise SieveSizeError(f"sieve limit must be >= 2, got {limit}")
    if limit > MAX_SIEVE_LIMIT:
        raise SieveSizeError(
            f"sieve limit {limit} exceeds memory budget {MAX_SIEVE_LIMIT}"
        )
    spf = np.zeros(limit + 1, dtype=np.int64)
    spf[1] = 1
    primes: list[int] = []
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            primes.append(i)
        si = spf[i]
        for p in primes:
            if p > si or i * p > limit:
                break
            spf[i * p] = p
    return FactorSieve(limit=limit, spf=spf)


def mobius(n: int, sieve: FactorSieve) -> int:
    """Moebius function: 0 on non-squarefree n, else (-1)^omega(n)."""
    sieve.check(n)
    if n == 1:
        return 1
    m = 1
    spf = sieve.spf
    while n > 1:
        p = int(spf[n])
        n //= p
        if n % p == 0:
            return 0
        m = -m
    return m


def euler_phi(n: int, sieve: FactorSieve) -> int:
    """Euler totient phi(n), exact integer arithmetic."""
    sieve.check(n)
    result = n
    for p, _ in sieve.factorize(n):
        result -= result // p
    return result


def von_mangoldt(n: int, sieve: FactorSieve) -> float:
    """Lambda(n): log p if n is a prime power p^k, else 0."""
    sieve.check(n)
    if n == 1:
        return 0.0
    p = int(sieve.spf[n])
    m = n
    while m % p == 0:
        m //= p
    return math.log(p) if m == 1 else 0.0


def gcd_lcm(d: int, e: int) -> tuple[int, int]:
    """(gcd, lcm) with lcm computed gcd-first to delay overflow."""
    if d < 1 or e < 1:
        raise ValueError("gcd_lcm requires positive integers")
    g = math.gcd(d, e)
    l = (d // g) * e
    return g, l


def mobius_table(limit: int, sieve: FactorSieve) -> np.ndarray:
    """mu(n) for n = 0..limit as an int8 array (index 0 unused)."""
    sieve.check(limit)
    mu = np.zeros(limit + 1, dtype=np.int8)
    for n in range(1, limit + 1):
        mu[n] = mobius(n, sieve)
    return mu


def phi_table(limit: int, sieve: FactorSieve) -> np.ndarray:
    """phi(n) for n = 0..limit as an int64 array (index 0 unused)."""
    sieve.check(limit)
    phi = np.zeros(limit + 1, dtype=np.int64)
    for n in range(1, limit + 1):
        phi[n] = euler_phi(n, sieve)
    return phi
