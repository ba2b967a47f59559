"""Complete exponential sums: additive characters, Ramanujan and Kloosterman
sums, and the composite character sums that arise after the delta expansion.

Conventions: ``e(x) = exp(2 pi i x)``; a sum over units modulo 1 has the single
term ``alpha = 0`` whose inverse is also 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import (
    core_split,
    divisor_count,
    divisors,
    mobius,
    mod_inverse,
)
from .errors import NonpositiveBase, NotCoprime, NumericalInconsistency

TWO_PI_I = 2j * math.pi
REAL_TOL = 1e-9


def _check_modulus(q: int) -> None:
    if q <= 0:
        raise NonpositiveBase(f"modulus {q} must be positive")


def additive_char(numerator: int, modulus: int) -> complex:
    _check_modulus(modulus)
    return complex(np.exp(TWO_PI_I * ((int(numerator) % modulus) / modulus)))


def e_mod(numerators, modulus: int) -> np.ndarray:
    """Vectorized ``e(k/modulus)`` with exact integer reduction first."""
    k = np.mod(np.asarray(numerators, dtype=np.int64), modulus)
    return np.exp(TWO_PI_I * (k / modulus))


@lru_cache(maxsize=4096)
def _units(q: int) -> tuple[np.ndarray, np.ndarray]:
    if q == 1:
        u = np.zeros(1, dtype=np.int64)
        return u, u.copy()
    r = np.arange(q, dtype=np.int64)
    u = r[np.gcd(r, q) == 1]
    inv = np.array([pow(int(a), -1, q) for a in u], dtype=np.int64)
    u.setflags(write=False)
    inv.setflags(write=False)
    return u, inv


def units(q: int) -> np.ndarray:
    """Residues coprime to ``q`` (read-only, cached)."""
    _check_modulus(q)
    return _units(q)[0]


def unit_inverses(q: int) -> np.ndarray:
    """Inverses aligned with :func:`units`."""
    _check_modulus(q)
    return _units(q)[1]


def _real_or_raise(z: complex, what: str) -> float:
    if abs(z.imag) > REAL_TOL * max(1.0, abs(z.real)):
        raise NumericalInconsistency(f"{what} has imaginary part {z.imag:.3e}")
    return float(z.real)


def ramanujan_sum(n: int, q: int) -> float:
    """``c_q(n)`` by direct summation over units."""
    _check_modulus(q)
    z = complex(e_mod(units(q) * int(n % q), q).sum())
    return _real_or_raise(z, f"c_{q}({n})")


def ramanujan_sum_exact(n: int, q: int) -> int:
    _check_modulus(q)
    g = math.gcd(int(n), q)
    return sum(mobius(q // d) * d for d in divisors(g))


def ramanujan_vector(ns, q: int, mu: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """``c_q(n)`` for an array of ``n`` via ``mu(q/g) phi(q) / phi(q/g)``, ``g = (n, q)``.

    ``mu`` and ``phi`` are sieved tables covering ``q``.
    """
    g = np.gcd(np.asarray(ns, dtype=np.int64), q)
    qg = q // g
    return mu[qg] * (phi[q] // phi[qg])


def kloosterman(a: int, b: int, c: int) -> float:
    _check_modulus(c)
    u, inv = _units(c)
    z = complex(e_mod(int(a) * u + int(b) * inv, c).sum())
    return _real_or_raise(z, f"S({a},{b};{c})")


@lru_cache(maxsize=256)
def kloosterman_table(c: int) -> np.ndarray:
    """Real matrix ``K[a, b] = S(a, b; c)`` for residues ``a, b`` mod ``c``."""
    _check_modulus(c)
    u, inv = _units(c)
    r = np.arange(c)
    left = e_mod(np.outer(r, u), c)
    right = e_mod(np.outer(r, inv), c)
    k = left @ right.T
    if np.max(np.abs(k.imag)) > REAL_TOL * max(1.0, float(np.max(np.abs(k.real)))):
        raise NumericalInconsistency(f"Kloosterman table mod {c} not real")
    out = np.ascontiguousarray(k.real)
    out.setflags(write=False)
    return out


def weil_majorant(a: int, b: int, c: int) -> float:
    _check_modulus(c)
    g = math.gcd(math.gcd(int(a), int(b)), c)
    return divisor_count(c) * math.sqrt(c) * math.sqrt(g)


# --- composite sums from the GL(3) Voronoi step -----------------------------


@dataclass(frozen=True)
class CharSumParams:
    r0: int
    m0: int
    bprime: int
    rprime: int = 1
    eta1: int = 1
    eta2: int = 1

    def __post_init__(self):
        for name in ("r0", "m0", "bprime", "rprime"):
            if getattr(self, name) <= 0:
                raise NonpositiveBase(f"{name} must be positive")
        if self.eta1 not in (1, -1) or self.eta2 not in (1, -1):
            raise ValueError("eta1, eta2 must be +1 or -1")
        if math.gcd(self.m0 * self.bprime, self.rprime) != 1:
            raise NotCoprime("need gcd(m0*bprime, rprime) = 1")

    @property
    def modulus(self) -> int:
        return self.r0 * self.m0 * self.bprime


def s0_sum(m: int, n: int, h: int, p: CharSumParams) -> complex:
    """``sum*_{alpha mod b} e((alpha h + eta2 alpha-bar n)/b) S(conj(alpha r'), eta1 m; b')``."""
    b, bp = p.modulus, p.bprime
    u, inv = _units(b)
    inv_rp = mod_inverse(p.rprime, bp)
    kl = kloosterman_table(bp)
    x = (inv % bp) * inv_rp % bp
    kvals = kl[x, (p.eta1 * m) % bp]
    return complex((e_mod(u * h + p.eta2 * inv * n, b) * kvals).sum())


def t_collapsed(m: int, n: int, h1: int, h2: int, p: CharSumParams) -> complex:
    bp = p.bprime
    g = np.arange(bp)
    vals = np.array([s0_sum(int(k), n, h1, p) * np.conj(s0_sum(int(k), n, h2, p)) for k in g])
    return complex((vals * e_mod(m * g, bp)).sum() / bp)


def _gram(p: CharSumParams) -> np.ndarray:
    """``G[a1, a2] = (1/b') sum_gamma S(a1 r', eta1 gamma) S(a2 r', eta1 gamma)``, inverses implied."""
    b, bp = p.modulus, p.bprime
    _, inv = _units(b)
    x = (inv % bp) * mod_inverse(p.rprime, bp) % bp
    kl = kloosterman_table(bp)
    k = kl[x][:, (p.eta1 * np.arange(bp)) % bp]
    return (k @ k.T) / bp


def curly_t_brute(ell: int, n: int, h1: int, h2: int, p: CharSumParams) -> complex:
    """The averaged double character sum, straight from its definition."""
    b, bp = p.modulus, p.bprime
    u, inv = _units(b)
    x = (inv % bp) * mod_inverse(p.rprime, bp) % bp
    kl = kloosterman_table(bp)
    total = 0j
    for gamma in range(bp):
        k = kl[x, (p.eta1 * gamma) % bp]
        v1 = e_mod(u * (h1 + ell) + p.eta2 * inv * n, b) * k
        v2 = e_mod(u * (h2 + ell) + p.eta2 * inv * n, b) * k
        total += v1.sum() * np.conj(v2.sum())
    return complex(total / bp)


def curly_t_brute_grid(ell: int, p: CharSumParams) -> np.ndarray:
    """Array ``T[n, h1, h2]`` over all residues mod ``r0 m0 b'`` for fixed ``ell``."""
    b = p.modulus
    u, inv = _units(b)
    g = _gram(p)
    r = np.arange(b)
    eh = e_mod(np.outer(r + ell, u), b)  # (h, alpha)
    en = e_mod(np.outer(p.eta2 * r, inv), b)  # (n, alpha)
    e = en[:, None, :] * eh[None, :, :]  # (n, h, alpha)
    return np.einsum("nha,ab,nkb->nhk", e, g, np.conj(e), optimize=True)


@dataclass(frozen=True)
class _Piece:
    weight: int  # mu(b1') b2'
    b1: int
    b2: int
    block: int
    congr: int  # beta1 = beta2 mod congr inside the block
    twist_b1: int  # s with S(H, N s^2; b1)
    twist_block: int  # inverse of b1 b2 mod block


@lru_cache(maxsize=512)
def _pieces(p: CharSumParams) -> tuple[_Piece, ...]:
    out = []
    r0m0 = p.r0 * p.m0
    for b1p in divisors(p.bprime):
        mu = mobius(b1p)
        if mu == 0:
            continue
        b2p = p.bprime // b1p
        m = r0m0 * b1p
        b0 = math.gcd(m, b2p)
        m_core, b1 = core_split(m, b0)
        b2_core, b2 = core_split(b2p, b0)
        block = m_core * b2_core
        s = mod_inverse(block * b2, b1)
        out.append(
            _Piece(mu * b2p, b1, b2, block, b2_core, s, mod_inverse(b1 * b2, block))
        )
    return tuple(out)


@lru_cache(maxsize=512)
def _block_sum(piece: _Piece) -> np.ndarray:
    """``Res[H1, H2, N]`` for the residual block modulus."""
    m, g, t = piece.block, piece.congr, piece.twist_block
    u, inv = _units(m)
    same = (u[:, None] - u[None, :]) % g == 0
    i1, i2 = np.nonzero(same)
    b1, b2 = u[i1], u[i2]
    ib1, ib2 = inv[i1], inv[i2]
    r = np.arange(m)
    out = np.empty((m, m, m), dtype=complex)
    for nres in range(m):
        left = e_mod((np.outer(r, b1) + nres * ib1) * t, m)
        right = e_mod(-(np.outer(b2, r) + nres * ib2[:, None]) * t, m)
        out[:, :, nres] = left @ right
    out.setflags(write=False)
    return out


def curly_t_reduced(ell: int, n: int, h1: int, h2: int, p: CharSumParams) -> complex:
    """Same quantity via the divisor split into a Ramanujan sum, two Kloosterman
    sums and a residual block of prime-power support shared with the modulus."""
    total = 0j
    big_n = p.eta2 * n
    for pc in _pieces(p):
        hh1, hh2 = h1 + ell, h2 + ell
        ram = ramanujan_sum_exact(h1 - h2, pc.b2)
        if ram == 0:
            continue
        nn = big_n * pc.twist_b1 * pc.twist_b1
        k = kloosterman(hh1, nn, pc.b1) * kloosterman(hh2, nn, pc.b1)
        res = _block_sum(pc)[hh1 % pc.block, hh2 % pc.block, big_n % pc.block]
        total += pc.weight * ram * k * res
    return complex(total)


@lru_cache(maxsize=512)
def _ramanujan_row(q: int) -> np.ndarray:
    return np.array([ramanujan_sum_exact(k, q) for k in range(q)])


def curly_t_reduced_grid(ell: int, p: CharSumParams) -> np.ndarray:
    b = p.modulus
    r = np.arange(b)
    out = np.zeros((b, b, b), dtype=complex)
    nn_all = p.eta2 * r
    for pc in _pieces(p):
        ram = _ramanujan_row(pc.b2)
        ram_hh = ram[(r[:, None] - r[None, :]) % pc.b2]  # (h1, h2)
        kl = kloosterman_table(pc.b1)
        hh = (r + ell) % pc.b1
        nn = (nn_all * pc.twist_b1 * pc.twist_b1) % pc.b1
        kk = kl[hh[None, :], nn[:, None]]  # (n, h)
        res = _block_sum(pc)
        hb = (r + ell) % pc.block
        rb = res[hb[:, None], hb[None, :], :]  # (h1, h2, N)
        rb = np.moveaxis(rb[:, :, nn_all % pc.block], 2, 0)  # (n, h1, h2)
        out += pc.weight * ram_hh[None] * kk[:, :, None] * kk[:, None, :] * rb
    return out


def curly_t_bound_shape(n, h1, h2, p: CharSumParams) -> np.ndarray:
    """``r0 m0 b' max(1, n^2) sum_{b''|b'} b'' [h1 = h2 mod b'']``, broadcast over arrays."""
    n, h1, h2 = (np.asarray(v, dtype=np.int64) for v in (n, h1, h2))
    div = np.zeros(np.broadcast(n, h1, h2).shape)
    for dd in divisors(p.bprime):
        div = div + dd * ((h1 - h2) % dd == 0)
    return p.r0 * p.m0 * p.bprime * np.maximum(1, n.astype(float) ** 2) * div


# --- character sum after the delta step ---------------------------------------


def c_sum_brute(n: int, d: int, q1: int, q2: int, c: int, sign: int = 1) -> complex:
    """``sum*_alpha sum_gamma [alpha gamma q1 = sign q2 mod c] e((alpha n - d gamma)/c)``."""
    _check_modulus(c)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    u, _ = _units(c)
    g = np.arange(c)
    hit = (np.outer(u, g) * q1 - sign * q2) % c == 0
    ia, ig = np.nonzero(hit)
    return complex(e_mod(u[ia] * n - d * g[ig], c).sum())


def c_sum_closed(n: int, d: int, q1: int, q2: int, c: int, sign: int = 1) -> float:
    """Kloosterman form ``S(n, -sign d q2 q1-bar; c)``, valid when ``(c, q1) = 1``."""
    _check_modulus(c)
    if math.gcd(c, q1) != 1:
        raise NotCoprime(f"gcd({c}, {q1}) > 1")
    return kloosterman(n, -sign * d * q2 * mod_inverse(q1, c), c)


def c_sum_brute_grid(q1: int, c: int, sign: int = 1) -> np.ndarray:
    """``C[n, d, q2]`` over all residues mod ``c``."""
    u, _ = _units(c)
    g = np.arange(c)
    prod = np.outer(u, g) * q1 % c
    out = np.empty((c, c, c), dtype=complex)
    r = np.arange(c)
    for q2 in range(c):
        ia, ig = np.nonzero(prod == (sign * q2) % c)
        out[:, :, q2] = e_mod(np.outer(r, u[ia]), c) @ e_mod(-np.outer(g[ig], r), c)
    return out


def c_sum_closed_grid(q1: int, c: int, sign: int = 1) -> np.ndarray:
    if math.gcd(c, q1) != 1:
        raise NotCoprime(f"gcd({c}, {q1}) > 1")
    kl = kloosterman_table(c)
    r = np.arange(c)
    arg = (-sign * np.outer(r, r) * mod_inverse(q1, c)) % c  # (d, q2)
    return kl[:, arg]
