"""Hecke eigenvalues of the weight-12 discriminant form and of its symmetric-square lift."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import gmpy2
import numpy as np

from .arith import mobius_sieve, primes_up_to, smallest_prime_factors
from .errors import InsufficientSourceTable, OutOfRange

WEIGHT = 12
MAX_BOUND = 10**7
CACHE_MAGIC = b"SCLB1"
_COEFF_BITS = 160  # |tau(n)| < n^6 < 2^140 for n <= 1e7, plus headroom for the sign offset


def _pentagonal_slots(length: int) -> np.ndarray:
    """Coefficients of ``prod (1 - q^n)`` below ``q^length`` (Euler's pentagonal theorem)."""
    out = np.zeros(length, dtype=np.int8)
    out[0] = 1
    k = np.arange(1, int(math.isqrt(2 * length // 3 + 1)) + 3)
    sign = np.where(k % 2 == 0, 1, -1).astype(np.int8)
    for gen in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
        ok = gen < length
        out[gen[ok]] = sign[ok]
    return out


def _pack(coeffs: np.ndarray, nbytes: int) -> gmpy2.mpz:
    buf = np.zeros((coeffs.size, nbytes), dtype=np.uint8)
    buf[coeffs != 0, 0] = 1
    pos = gmpy2.mpz(int.from_bytes(np.where(coeffs[:, None] > 0, buf, 0).tobytes(), "little"))
    neg = gmpy2.mpz(int.from_bytes(np.where(coeffs[:, None] < 0, buf, 0).tobytes(), "little"))
    return pos - neg


def ramanujan_tau_list(bound: int) -> list[int]:
    """Exact ``tau(0..bound)`` with ``tau(0) = 0``.

    ``sum tau(n) q^n = q prod (1 - q^n)^24``. The 24th power is taken by
    Kronecker substitution: the series becomes one big integer with a
    160-bit slot per coefficient, arithmetic is done modulo ``2^(160 L)`` so
    truncation is free, and negative coefficients are recovered by adding a
    half-range offset to every slot before unpacking.
    """
    length = bound  # coefficients of q^0..q^(bound-1) of the product
    if length <= 0:
        return [0]
    nbytes = _COEFF_BITS // 8
    bits = _COEFF_BITS * length
    base = gmpy2.f_mod_2exp(_pack(_pentagonal_slots(length), nbytes), bits)
    acc, power, e = gmpy2.mpz(1), base, 24
    while e:
        if e & 1:
            acc = gmpy2.f_mod_2exp(acc * power, bits)
        e >>= 1
        if e:
            power = gmpy2.f_mod_2exp(power * power, bits)
    offset = 1 << (_COEFF_BITS - 1)
    spread = int.from_bytes(offset.to_bytes(nbytes, "little") * length, "little")
    raw = int(gmpy2.f_mod_2exp(acc + spread, bits)).to_bytes(nbytes * length, "little")
    return [0] + [
        int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - offset for i in range(length)
    ]


def ramanujan_tau_naive(bound: int) -> list[int]:
    """Quadratic-time reference for small bounds: repeated multiplication by ``(1 - q^n)``."""
    series = [0] * (bound + 1)
    series[0] = 1
    for n in range(1, bound + 1):
        for _ in range(24):
            for k in range(bound, n - 1, -1):
                series[k] -= series[k - n]
    return [0] + series[:bound]


@dataclass(frozen=True)
class FourierCoefficientTable:
    weight: int
    bound: int
    lam: np.ndarray = field(repr=False)  # lam[0] = 0, lam[n] for 1 <= n <= bound
    tau: tuple[int, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.lam.shape != (self.bound + 1,):
            raise ValueError("lam must have length bound + 1")
        self.lam.setflags(write=False)

    def __getitem__(self, n: int) -> float:
        return gl2_coeff(self, n)


def build_gl2_table(bound: int, keep_exact: bool = False) -> FourierCoefficientTable:
    if bound < 1:
        raise ValueError("bound must be positive")
    if bound > MAX_BOUND:
        raise ValueError(f"bound {bound} exceeds the memory guard {MAX_BOUND}")
    tau = ramanujan_tau_list(bound)
    n = np.arange(bound + 1, dtype=float)
    lam = np.zeros(bound + 1)
    # exact integers to float, then a single power scaling
    lam[1:] = np.array([float(t) for t in tau[1:]]) / n[1:] ** ((WEIGHT - 1) / 2)
    return FourierCoefficientTable(WEIGHT, bound, lam, tuple(tau) if keep_exact else None)


def gl2_coeff(table: FourierCoefficientTable, n: int) -> float:
    if not 1 <= n <= table.bound:
        raise OutOfRange(f"n={n} outside 1..{table.bound}")
    return float(table.lam[n])


def lam_extended(table: FourierCoefficientTable, ns) -> np.ndarray:
    """``lambda(n)`` with the convention ``lambda(n) = 0`` for ``n <= 0``."""
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size and ns.max() > table.bound:
        raise OutOfRange(f"n={int(ns.max())} beyond table bound {table.bound}")
    return np.where(ns > 0, table.lam[np.clip(ns, 0, None)], 0.0)


# --- symmetric-square lift -----------------------------------------------------


@dataclass(frozen=True)
class GL3CoefficientTable:
    bound1: int
    bound2: int
    A: np.ndarray = field(repr=False)  # A[m, n], index 0 unused
    row: np.ndarray = field(repr=False)  # A(1, n) for n <= max(bound1, bound2)
    langlands: tuple[float, float, float] = (WEIGHT - 1.0, 0.0, -(WEIGHT - 1.0))

    def __post_init__(self):
        self.A.setflags(write=False)
        self.row.setflags(write=False)

    def coeff(self, m: int, n: int) -> float:
        if not (1 <= m <= self.bound1 and 1 <= n <= self.bound2):
            raise OutOfRange(f"({m},{n}) outside table")
        return float(self.A[m, n])

    def a1(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.int64)
        if ns.size and (ns.min() < 1 or ns.max() >= self.row.size):
            raise OutOfRange("A(1,n) requested outside table")
        return self.row[ns]


def _sym2_prime_powers(lam_p: float, kmax: int) -> list[float]:
    """Complete homogeneous symmetric polynomials of ``(alpha^2, 1, beta^2)``, degrees 0..kmax."""
    e1 = lam_p * lam_p - 1.0  # = e2 since alpha beta = 1; e3 = 1
    h = [1.0, e1]
    for k in range(2, kmax + 1):
        h.append(e1 * h[k - 1] - e1 * h[k - 2] + (h[k - 3] if k >= 3 else 0.0))
    return h[: kmax + 1]


def sym2_row(gl2: FourierCoefficientTable, bound: int) -> np.ndarray:
    """``A(1, n)`` for ``n <= bound`` by multiplicativity from local prime-power values."""
    if gl2.bound < bound:
        raise InsufficientSourceTable(f"need lambda(p) for p <= {bound}, table has {gl2.bound}")
    row = np.zeros(bound + 1)
    if bound >= 1:
        row[1] = 1.0
    spf = smallest_prime_factors(bound)
    local: dict[int, list[float]] = {}
    for n in range(2, bound + 1):
        p = int(spf[n])
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        if p not in local:
            local[p] = _sym2_prime_powers(float(gl2.lam[p]), int(math.log(bound, p)) + 1)
        row[n] = local[p][k] * row[m]
    return row


def build_sym2_table(gl2: FourierCoefficientTable, bound1: int, bound2: int) -> GL3CoefficientTable:
    """Symmetric-square coefficients ``A(m, n)`` for ``m <= bound1``, ``n <= bound2``.

    Only ``lambda(p)`` enters (via ``A(1, p) = lambda(p)^2 - 1``), so the source
    table must reach ``max(bound1, bound2)``. The two-variable values come from
    ``A(m, n) = sum_{d | (m, n)} mu(d) A(m/d, 1) A(1, n/d)`` with ``A(m, 1) = A(1, m)``.
    """
    if bound1 < 1 or bound2 < 1:
        raise ValueError("bounds must be positive")
    top = max(bound1, bound2)
    row = sym2_row(gl2, top)
    mu = mobius_sieve(top)
    A = np.zeros((bound1 + 1, bound2 + 1))
    m_idx = np.arange(bound1 + 1)
    n_idx = np.arange(bound2 + 1)
    for d in range(1, min(bound1, bound2) + 1):
        if mu[d] == 0:
            continue
        ms = m_idx[d::d]
        ns = n_idx[d::d]
        A[d::d, d::d] += mu[d] * np.outer(row[ms // d], row[ns // d])
    return GL3CoefficientTable(bound1, bound2, A, row)


def rankin_selberg_ratio(table: GL3CoefficientTable, N: int) -> float:
    if not 1 <= N < table.row.size:
        raise OutOfRange(f"N={N} outside table")
    return float(np.sum(table.row[1 : N + 1] ** 2) / N)


# --- binary cache ----------------------------------------------------------------


def write_coeff_cache(path: str | Path, table: FourierCoefficientTable) -> None:
    header = CACHE_MAGIC + struct.pack("<qq", table.weight, table.bound)
    Path(path).write_bytes(header + table.lam[1:].astype("<f8").tobytes())


def read_coeff_cache(path: str | Path) -> FourierCoefficientTable:
    data = Path(path).read_bytes()
    n = len(CACHE_MAGIC)
    if data[:n] != CACHE_MAGIC:
        raise ValueError(f"{path} is not a coefficient cache")
    weight, bound = struct.unpack("<qq", data[n : n + 16])
    body = np.frombuffer(data[n + 16 :], dtype="<f8")
    if body.size != bound:
        raise ValueError(f"{path}: expected {bound} coefficients, found {body.size}")
    lam = np.zeros(bound + 1)
    lam[1:] = body
    return FourierCoefficientTable(int(weight), int(bound), lam)


def load_or_build_gl2(bound: int, cache: str | Path | None = None) -> FourierCoefficientTable:
    """Reuse a cache file when it is large enough, otherwise build and (if a path is given) write it."""
    if cache is not None and Path(cache).exists():
        table = read_coeff_cache(cache)
        if table.bound >= bound and table.weight == WEIGHT:
            return table
    table = build_gl2_table(bound)
    if cache is not None:
        write_coeff_cache(cache, table)
    return table
