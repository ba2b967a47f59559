"""Elementary number theory on machine integers.

Factorization uses a smallest-prime-factor sieve below ``SIEVE_LIMIT``, trial
division by the sieved primes above it, and Pollard-Brent rho with a
deterministic Miller-Rabin test for whatever cofactor remains.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .errors import NotInvertible, NonpositiveBase

SIEVE_LIMIT = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ps = [p for p, _ in self.factors]
        if ps != sorted(set(ps)):
            raise ValueError("primes must be strictly increasing")
        if math.prod(p**e for p, e in self.factors) != self.n:
            raise ValueError("factorization does not multiply back to n")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def radical(self) -> int:
        return math.prod(self.primes)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


@lru_cache(maxsize=1)
def _spf() -> np.ndarray:
    spf = np.zeros(SIEVE_LIMIT + 1, dtype=np.int32)
    for p in range(2, math.isqrt(SIEVE_LIMIT) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


@lru_cache(maxsize=1)
def _primes_below_limit() -> np.ndarray:
    spf = _spf()
    n = np.arange(spf.size)
    return n[(spf == n) & (n >= 2)]


def smallest_prime_factors(limit: int) -> np.ndarray:
    """Array ``spf`` with ``spf[n]`` the least prime dividing ``n`` (``spf[0]=spf[1]=0,1``)."""
    if limit <= SIEVE_LIMIT:
        return _spf()[: limit + 1].copy()
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


def primes_up_to(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    spf = smallest_prime_factors(limit)
    n = np.arange(limit + 1)
    return n[(spf == n) & (n >= 2)].astype(np.int64)


def is_probable_prime(n: int) -> bool:
    """Deterministic for n < 3.3e24 (first twelve prime bases)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n, random.Random(n))
    _split_large(d, out)
    _split_large(n // d, out)


def factorize(n: int) -> Factorization:
    n = int(n)
    if n <= 0:
        raise NonpositiveBase(f"cannot factor {n}")
    found: dict[int, int] = {}
    m = n
    if m <= SIEVE_LIMIT:
        spf = _spf()
        while m > 1:
            p = int(spf[m])
            found[p] = found.get(p, 0) + 1
            m //= p
    else:
        for p in _primes_below_limit().tolist():
            if p * p > m:
                break
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                found[p] = e
        if m > 1 and m <= SIEVE_LIMIT**2:
            found[m] = found.get(m, 0) + 1
        else:
            _split_large(m, found)
    return Factorization(n, tuple(sorted(found.items())))


def mod_inverse(a: int, m: int) -> int:
    if m <= 0:
        raise NonpositiveBase(f"modulus {m} must be positive")
    if m == 1:
        return 0
    try:
        return pow(int(a), -1, m)
    except ValueError:
        raise NotInvertible(f"{a} is not invertible mod {m}") from None


def mobius(n: int) -> int:
    f = factorize(n)
    return 0 if not f.is_squarefree() else (-1) ** len(f.factors)


def euler_phi(n: int) -> int:
    f = factorize(n)
    return math.prod(p ** (e - 1) * (p - 1) for p, e in f.factors)


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n).factors:
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def divisor_count(n: int) -> int:
    return math.prod(e + 1 for _, e in factorize(n).factors)


def core_split(b: int, a: int) -> tuple[int, int]:
    """Split ``b = b0 * b1`` with every prime of ``b0`` dividing ``a`` and ``gcd(b1, a) = 1``."""
    if b <= 0:
        raise NonpositiveBase(f"cannot split {b}")
    b1 = b
    g = math.gcd(b1, a)
    while g > 1:
        b1 //= g
        g = math.gcd(b1, g)
    return b // b1, b1


def gcd_many(*xs: int) -> int:
    return reduce(math.gcd, xs, 0)


def mobius_sieve(limit: int) -> np.ndarray:
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in primes_up_to(limit).tolist():
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


def phi_sieve(limit: int) -> np.ndarray:
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in primes_up_to(limit).tolist():
        phi[p::p] -= phi[p::p] // p
    return phi


def divisor_count_sieve(limit: int) -> np.ndarray:
    d = np.zeros(limit + 1, dtype=np.int64)
    for k in range(1, limit + 1):
        d[k::k] += 1
    return d
