"""Smooth delta-symbol decomposition and the identities built on it.

``delta_decompose`` writes ``delta(n = 0) = s1 - s2`` with both pieces finite
sums over divisors. ``hyperbola_split`` splits a fixed-shift convolution sum
into a congruence main term and two averaged shifted sums. ``s_split_exact``
and ``s1_simplified`` evaluate the twisted representation count
``sum_{d, q2} V1(d/D) V2(q2/Q2) [n +- d q1 q2 = 0]`` through the delta
expansion, first by definition and then after Poisson summation in ``d`` and
``q2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .arith import mobius_sieve, mod_inverse, phi_sieve
from .coeffs import FourierCoefficientTable, GL3CoefficientTable, lam_extended
from .errors import NonpositiveBase, TableTooSmall, WindowMismatch
from .expsums import e_mod, units, unit_inverses
from .quadrature import periodized_fourier
from .voronoi import stationary_phase_negligible
from .windows import ANNULUS_W, PLATEAU_U, BumpFunction, Plateau

DESK_GUARD = 10**6


@dataclass(frozen=True)
class DeltaConfig:
    C: float
    D: float
    q: int = 1
    U: BumpFunction = PLATEAU_U
    W: BumpFunction = ANNULUS_W
    normalizer: float = field(init=False)

    def __post_init__(self):
        if not self.C > 1 or not self.D > 0 or self.q < 1:
            raise ValueError("need C > 1, D > 0, q >= 1")
        c = np.arange(1, math.ceil(3 * self.C) + 1) / self.C
        norm = float(np.sum(self.W(c) * self.U(c)))
        if norm <= 0:
            raise ValueError("normalizer vanished; C too small for the kernel supports")
        object.__setattr__(self, "normalizer", norm)

    def h(self, x, y):
        return delta_cor_kernel(x, y, self)


def delta_cor_kernel(x, y, cfg: DeltaConfig):
    """``h(x, y) = W(x) U(x) U(y) - W(y) U(x) U(y)``."""
    ux, uy = cfg.U(x), cfg.U(y)
    return (cfg.W(x) - cfg.W(y)) * ux * uy


def delta_decompose(n: int, cfg: DeltaConfig) -> tuple[float, float]:
    if abs(n) > DESK_GUARD:
        raise ValueError(f"|n| must be at most {DESK_GUARD}")
    C, D, q = cfg.C, cfg.D, cfg.q
    c = np.arange(1, math.ceil(2 * C) + 1)  # W(c/C) = 0 beyond 2C
    c = c[n % (c * q) == 0]
    s1 = np.sum(cfg.W(c / C) * cfg.U(n / (c * D * q)) * cfg.U(c / C))
    d = np.arange(1, math.ceil(3 * D) + 1)
    d = d[n % (d * q) == 0]
    s2 = np.sum(cfg.W(n / (d * q * C)) * cfg.U(n / (C * d * q)) * cfg.U(d / D))
    return float(s1 / cfg.normalizer), float(s2 / cfg.normalizer)


def delta_expansion(n: int, cfg: DeltaConfig) -> tuple[complex, complex]:
    """The two halves of ``(1/norm) sum_c 1/(cq) sum_{alpha mod cq} e(alpha n/(cq)) h(c/C, n/(cCq))``.

    The first half carries ``W(x) U(x) U(y)`` and the second ``W(y) U(x) U(y)``;
    for ``C = D`` they reproduce ``s1`` and ``s2`` of :func:`delta_decompose`.
    """
    first = second = 0j
    for c in range(1, math.ceil(3 * cfg.C) + 1):
        m = c * cfg.q
        x, y = c / cfg.C, n / (c * cfg.C * cfg.q)
        ux_uy = float(cfg.U(x) * cfg.U(y))
        if not ux_uy:
            continue
        chars = e_mod(np.arange(m) * n, m).sum() / m
        first += chars * float(cfg.W(x)) * ux_uy
        second += chars * float(cfg.W(y)) * ux_uy
    return complex(first / cfg.normalizer), complex(second / cfg.normalizer)


def twist(a: float, b: float, t: float) -> complex:
    """``(a^2 / b^2)^(it)``."""
    if a <= 0 or b <= 0:
        raise NonpositiveBase("twist needs positive arguments")
    return complex(np.exp(1j * t * (2.0 * math.log(a) - 2.0 * math.log(b))))


# --- hyperbola splitting ---------------------------------------------------------


@dataclass(frozen=True)
class HyperbolaSplitResult:
    main_term: complex
    as_plus: complex
    as_minus: complex
    direct: complex
    fixed_shift_sum: complex
    mean_weight: complex

    @property
    def residual(self) -> float:
        return abs(self.direct - (self.main_term - self.as_plus - self.as_minus))

    @property
    def relative_residual(self) -> float:
        scale = max(abs(self.direct), abs(self.main_term), abs(self.as_plus), abs(self.as_minus))
        return self.residual / scale if scale else 0.0


STANDARD_PHI = Plateau(1.0, 2.0, 0.5, 2.5)


def hyperbola_split(
    ell: int,
    X: float,
    r: int,
    Q,
    D: float,
    F,
    gl2: FourierCoefficientTable,
    gl3: GL3CoefficientTable,
    V,
    phi=STANDARD_PHI,
    Y: float | None = None,
) -> HyperbolaSplitResult:
    """Main term / averaged-shift decomposition of ``sum_m A(1,m) lambda(rm+ell) V(m/X)``.

    ``Q`` is a sequence of ``(q, b(q))`` pairs; the average uses ``1/len(Q)``.
    ``F`` must satisfy ``F(0) = 1``; ``phi`` must equal 1 wherever
    ``(rm + ell)/Y`` lands for ``m`` in the support of ``V``.
    """
    if abs(float(F(0.0)) - 1.0) > 1e-15:
        raise ValueError("F(0) must be 1")
    if not Q:
        raise ValueError("Q must be nonempty")
    Y = r * X + ell if Y is None else Y
    lo, hi = V.support
    m = np.arange(max(1, math.floor(lo * X)), math.ceil(hi * X) + 1)
    vm = V(m / X)
    m, vm = m[vm != 0], vm[vm != 0]
    if m.size == 0:
        raise ValueError("V has no integer points at this X")
    am = gl3.a1(m) * vm
    base = r * m + ell
    if np.any(phi(base / Y) != 1.0):
        raise WindowMismatch("phi is not 1 on the support of the fixed-shift sum")
    flo, fhi = F.support
    qmax = max(q for q, _ in Q)
    reach = math.ceil(max(abs(flo), abs(fhi)) * D) * qmax
    plo, phi_hi = phi.support
    n_lo, n_hi = max(1, math.floor(plo * Y)), math.ceil(phi_hi * Y)
    if max(n_hi, int(base.max()) + reach) > gl2.bound:
        raise TableTooSmall("GL(2) table too short for the split")

    fixed = complex(np.sum(am * lam_extended(gl2, base) * phi(base / Y)))
    n = np.arange(n_lo, n_hi + 1)
    lam_phi = lam_extended(gl2, n) * phi(n / Y)
    diff = base[:, None] - n[None, :]  # rm + ell - n
    mt = asp = asm = 0j
    weight = 0j
    for q, b in Q:
        if q < 1:
            raise ValueError("moduli must be positive")
        weight += b
        hit = diff % q == 0
        fvals = np.where(hit, F(diff / (D * q)), 0.0)
        mt += b * complex(am @ (fvals @ lam_phi))
        d = np.arange(1, math.ceil(max(abs(flo), abs(fhi)) * D) + 1)
        for sgn, fsign in ((1, -1), (-1, 1)):
            # sgn = +1: lambda(rm + ell + dq) F(-d/D); sgn = -1: lambda(rm + ell - dq) F(d/D)
            shifted = base[:, None] + sgn * d[None, :] * q
            vals = lam_extended(gl2, shifted) * phi(shifted / Y) * F(fsign * d / D)[None, :]
            s = complex(am @ vals.sum(axis=1))
            if sgn == 1:
                asp += b * s
            else:
                asm += b * s
    k = len(Q)
    mean = weight / k
    return HyperbolaSplitResult(mt / k, asp / k, asm / k, mean * fixed, fixed, mean)


# --- split of a twisted representation count ---------------------------------------


@dataclass(frozen=True)
class SplitProblem:
    """A twisted count ``sum V1(d/D) V2(q2/Q2) (n^2/(d q1 q2)^2)^(it) [n + sign d q1 q2 = 0]``."""

    q1: int
    D: float
    Q2: float
    V1: object
    V2: object
    t: float
    cfg: DeltaConfig
    c_threshold: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.cfg.q != 1:
            raise ValueError("the split uses the q = 1 delta expansion")
        if self.cfg.C < self.c_threshold:
            raise ValueError("need C >= c_threshold")
        if self.q1 < 1:
            raise ValueError("q1 must be positive")

    @cached_property
    def pairs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(d, q2, V1 V2)`` over all lattice points with nonzero weight."""
        d = _lattice(self.V1, self.D)
        q2 = _lattice(self.V2, self.Q2)
        dd, qq = np.meshgrid(d, q2, indexing="ij")
        w = self.V1(dd / self.D) * self.V2(qq / self.Q2)
        keep = w != 0
        return dd[keep], qq[keep], w[keep]

    def twist_factor(self, n: int, prod) -> np.ndarray:
        prod = np.asarray(prod, dtype=float)
        if n == 0:
            return np.ones_like(prod, dtype=complex)
        return np.exp(2j * self.t * (math.log(abs(n)) - np.log(prod)))


def _lattice(V, scale: float) -> np.ndarray:
    lo, hi = V.support
    k = np.arange(math.floor(lo * scale), math.ceil(hi * scale) + 1)
    return k[V(k / scale) != 0]


def twisted_representation_count(n: int, prob: SplitProblem) -> complex:
    d, q2, w = prob.pairs
    prod = d * prob.q1 * q2
    hit = n + prob.sign * prod == 0
    return complex(np.sum(w[hit] * prob.twist_factor(n, prod[hit])))


def _split_tables(prob: SplitProblem, ns: np.ndarray):
    """Per-``N`` values of the exact ``c <= threshold`` and ``c > threshold`` pieces."""
    d, q2, _ = prob.pairs
    prod = d * prob.q1 * q2
    big_n = (ns[:, None] + prob.sign * prod[None, :]).ravel()
    n_lo, n_hi = int(big_n.min()), int(big_n.max())
    grid = np.arange(n_lo, n_hi + 1)
    C = prob.cfg.C
    kmax = math.ceil(3 * C) - 1
    mu, phi = mobius_sieve(kmax), phi_sieve(kmax)
    low = np.zeros((kmax + 1, grid.size))
    high = np.zeros((kmax + 1, grid.size))
    for c in range(1, kmax + 1):
        g = np.gcd(grid, c)
        ram = mu[c // g] * (phi[c] // phi[c // g])  # c_c(N), exact
        target = low if c <= prob.c_threshold else high
        target[c::c] += ram
    k = np.arange(1, kmax + 1)
    hk = prob.cfg.h(k[:, None] / C, grid[None, :] / (k[:, None] * C))
    s0 = (hk * low[1:] / k[:, None]).sum(axis=0) / prob.cfg.normalizer
    s1 = (hk * high[1:] / k[:, None]).sum(axis=0) / prob.cfg.normalizer
    return n_lo, s0, s1


def s_split_exact_many(ns, prob: SplitProblem) -> tuple[np.ndarray, np.ndarray]:
    """Exact ``(S0(n), S1(n))`` for each ``n``: sums over ``c0 c < 3C``, units mod ``c``, ``d`` and ``q2``.

    The unit sum is a Ramanujan sum, taken from its closed divisor form.
    """
    ns = np.asarray(ns, dtype=np.int64)
    if np.any(np.abs(ns) > DESK_GUARD):
        raise ValueError(f"|n| must be at most {DESK_GUARD}")
    d, q2, w = prob.pairs
    prod = d * prob.q1 * q2
    if prod.size == 0:
        z = np.zeros(ns.size, dtype=complex)
        return z, z.copy()
    n_lo, s0_tab, s1_tab = _split_tables(prob, ns)
    out0 = np.empty(ns.size, dtype=complex)
    out1 = np.empty(ns.size, dtype=complex)
    for i, n in enumerate(ns.tolist()):
        idx = n + prob.sign * prod - n_lo
        tw = w * prob.twist_factor(n, prod)
        out0[i] = np.sum(tw * s0_tab[idx])
        out1[i] = np.sum(tw * s1_tab[idx])
    return out0, out1


def s_split_exact(
    n: int,
    q1: int,
    D: float,
    Q2: float,
    V1,
    V2,
    t: float,
    cfg: DeltaConfig,
    c_threshold: float,
    sign: int = 1,
) -> tuple[complex, complex]:
    prob = SplitProblem(q1, D, Q2, V1, V2, t, cfg, c_threshold, sign)
    s0, s1 = s_split_exact_many([n], prob)
    return complex(s0[0]), complex(s1[0])


def s_split_reference(n: int, prob: SplitProblem) -> tuple[complex, complex]:
    """Literal loop over ``c0, c``, units ``alpha mod c`` and ``(d, q2)``; small instances only."""
    d, q2, w = prob.pairs
    prod = d * prob.q1 * q2
    big_n = n + prob.sign * prod
    tw = w * prob.twist_factor(n, prod)
    C = prob.cfg.C
    s0 = s1 = 0j
    for k in range(1, math.ceil(3 * C)):
        hk = prob.cfg.h(k / C, big_n / (k * C))
        if not np.any(hk):
            continue
        for c in (c for c in range(1, k + 1) if k % c == 0):
            chars = e_mod(np.outer(big_n, units(c)), c).sum(axis=1)
            term = complex(np.sum(tw * chars * hk)) / k
            if c <= prob.c_threshold:
                s0 += term
            else:
                s1 += term
    return s0 / prob.cfg.normalizer, s1 / prob.cfg.normalizer


# --- S1 after Poisson summation --------------------------------------------------


@dataclass(frozen=True)
class S1Evaluation:
    values: np.ndarray
    quad_error: float
    d_radius: int
    q2_radius: int
    kernel_counts: dict


def _dual_radius(c: int, length: float, V, t: float, Z: float, Y: float, eps: float) -> int:
    """Largest ``|k|`` whose phase ``2 pi k length x / c - 2 t log x`` is not stationary-phase negligible."""
    lo, hi = V.support
    lo = max(lo, 1e-12)
    slope = 2 * math.pi * length / c
    a, b = 2 * t / hi, 2 * t / lo
    stationary_phase_negligible(0.0, Z, Y, eps)  # argument validation
    thr = Z * Y**eps
    top = int(math.ceil((max(abs(a), abs(b)) + thr) / slope)) + 2
    freq = slope * np.arange(1, top + 1)

    def dist(f):
        return np.where((a <= f) & (f <= b), 0.0, np.minimum(np.abs(f - a), np.abs(f - b)))

    alive = (dist(freq) < thr) | (dist(-freq) < thr)
    dead = np.flatnonzero(~alive)
    return int(dead[0]) if dead.size else top


def _fold(values: np.ndarray, kmax: int, c: int) -> np.ndarray:
    k = np.arange(-kmax, kmax + 1)
    return np.bincount(k % c, weights=values.real, minlength=c) + 1j * np.bincount(
        k % c, weights=values.imag, minlength=c
    )


def _contract(fold_a: np.ndarray, fold_b: np.ndarray, c: int, q1: int, sign: int, kernel: str) -> tuple[np.ndarray, np.ndarray]:
    """``H`` over units ``x mod c`` with ``sum_{delta1, delta2} A B C(n, delta1, q1, delta2; c) = sum_x e(nx/c) H(x)``."""
    u = units(c)
    r = np.arange(c)
    if kernel == "closed":
        # C = S(n, -sign delta1 delta2 q1-bar; c)
        theta = (-sign * mod_inverse(q1, c) * unit_inverses(c)) % c
        b_tilde = np.fft.ifft(fold_b) * c  # sum_delta2 B e(delta2 phi / c)
        h = b_tilde[(r[None, :] * theta[:, None]) % c] @ fold_a
    else:
        # C = sum*_alpha e(alpha n/c) sum_gamma e(-d gamma/c) [alpha gamma q1 = sign q2]
        a_hat = np.fft.fft(fold_a)  # sum_delta1 A e(-delta1 gamma / c)
        h = fold_b[(sign * q1 * u[:, None] * r[None, :]) % c] @ a_hat
    return u, h


def s1_simplified_many(
    ns,
    prob: SplitProblem,
    eps: float = 0.1,
    Y: float | None = None,
    radius_multiplier: float = 32.0,
    kernel: str = "auto",
    rel_tol: float = 1e-12,
) -> S1Evaluation:
    """Post-Poisson evaluation of the ``c > threshold`` piece.

    For each ``(c0, c)`` with ``h`` constant over the support (true once
    ``|n| + D q1 Q2 sup(xy) <= c0 c C``), the double integral factorizes into
    one-dimensional transforms of ``V1(x) x^(-2it)`` and ``V2(y) y^(-2it)``,
    computed at all dual frequencies by a periodized trapezoid FFT. Dual
    frequencies are cut where the stationary-phase predicate (with inertness
    ``radius_multiplier * Z``) declares them negligible. The character sum is
    the Kloosterman form when ``(c, q1) = 1`` and the defining double sum
    otherwise (``kernel='auto'``); ``'closed'`` or ``'brute'`` force one.
    Pairs where ``h`` varies over the support use a two-dimensional transform.
    """
    ns = np.asarray(ns, dtype=np.int64)
    if kernel not in ("auto", "closed", "brute"):
        raise ValueError("kernel must be auto, closed or brute")
    out = np.zeros(ns.size, dtype=complex)
    zero = ns == 0
    err = 0.0
    counts = {"closed": 0, "brute": 0, "general": 0}
    radii = [0, 0]
    groups = [(~zero, prob)]
    if zero.any():
        groups.append((zero, _replace_t(prob, 0.0)))
    for mask, pb in groups:
        if not mask.any():
            continue
        vals, e, rd, counts_g = _s1_core(ns[mask], pb, eps, Y, radius_multiplier, kernel, rel_tol)
        out[mask] = vals
        err = max(err, e)
        radii = [max(radii[0], rd[0]), max(radii[1], rd[1])]
        for key in counts:
            counts[key] += counts_g[key]
    return S1Evaluation(out, err, radii[0], radii[1], counts)


def _replace_t(prob: SplitProblem, t: float) -> SplitProblem:
    return SplitProblem(prob.q1, prob.D, prob.Q2, prob.V1, prob.V2, t, prob.cfg, prob.c_threshold, prob.sign)


def _s1_core(ns, prob: SplitProblem, eps, Y, mult, kernel, rel_tol):
    C, t = prob.cfg.C, prob.t
    D, Q2, q1, sign = prob.D, prob.Q2, prob.q1, prob.sign
    lo1, hi1 = prob.V1.support
    lo2, hi2 = prob.V2.support
    reach = D * q1 * Q2 * max(abs(lo1), abs(hi1)) * max(abs(lo2), abs(hi2))
    if Y is None:
        Y = max(float(np.max(np.abs(ns))), reach, 2.0)
    if prob.pairs[0].size == 0:
        return np.zeros(ns.size, complex), 0.0, (0, 0), {"closed": 0, "brute": 0, "general": 0}
    g1 = lambda x: prob.V1(x) * np.exp(-2j * t * np.log(np.clip(x, 1e-300, None)))
    g2 = lambda y: prob.V2(y) * np.exp(-2j * t * np.log(np.clip(y, 1e-300, None)))
    twist_n = np.array([complex(prob.twist_factor(int(n), 1.0)) for n in ns]) * np.exp(
        -2j * t * math.log(D * q1 * Q2)
    )
    out = np.zeros(ns.size, dtype=complex)
    err = 0.0
    counts = {"closed": 0, "brute": 0, "general": 0}
    rmax = [0, 0]
    nmax = float(np.max(np.abs(ns)))
    kmax_prod = math.ceil(3 * C) - 1
    for c in range(math.floor(prob.c_threshold) + 1, kmax_prod + 1):
        const_w = 0.0
        general = []
        for c0 in range(1, kmax_prod // c + 1):
            k = c0 * c
            if k >= 3 * C:
                break
            x0 = k / C
            if (nmax + reach) <= k * C:
                const_w += float(prob.cfg.W(x0) * prob.cfg.U(x0)) / c0
            else:
                general.append(c0)
        if const_w == 0.0 and not general:
            continue
        rd = _dual_radius(c, D, prob.V1, t, mult * getattr(prob.V1, "Z", 4.0), Y, eps)
        rq = _dual_radius(c, Q2, prob.V2, t, mult * getattr(prob.V2, "Z", 4.0), Y, eps)
        rmax = [max(rmax[0], rd), max(rmax[1], rq)]
        kern = kernel
        if kern == "auto":
            kern = "closed" if math.gcd(c, q1) == 1 else "brute"
        if kern == "closed" and math.gcd(c, q1) != 1:
            raise ValueError(f"closed kernel needs gcd(c, q1) = 1 (c={c})")
        e_nx = None
        if const_w:
            f1 = periodized_fourier(g1, lo1, hi1, c / D, rd, rel_tol)
            f2 = periodized_fourier(g2, lo2, hi2, c / Q2, rq, rel_tol)
            err = max(err, f1.error_estimate * float(np.max(np.abs(f2.values))) + f2.error_estimate * float(np.max(np.abs(f1.values))))
            u, hvals = _contract(_fold(f1.values, rd, c), _fold(f2.values, rq, c), c, q1, sign, kern)
            e_nx = e_mod(np.outer(ns, u), c)
            out += (D * Q2 / prob.cfg.normalizer) * const_w / c**2 * twist_n * (e_nx @ hvals)
            counts[kern] += 1
        for c0 in general:
            counts["general"] += 1
            if e_nx is None:
                e_nx = e_mod(np.outer(ns, units(c)), c)
            for i, n in enumerate(ns.tolist()):
                val, e = _general_term(int(n), c0, c, prob, rd, rq, kern, rel_tol)
                out[i] += (D * Q2 / prob.cfg.normalizer) / (c0 * c**2) * val
                err = max(err, e)
    return out, err, tuple(rmax), counts


def _general_term(n: int, c0: int, c: int, prob: SplitProblem, rd: int, rq: int, kern: str, rel_tol: float):
    """One ``(c0, c)`` term with ``h`` inside the double integral (two-dimensional periodized transform)."""
    C, t = prob.cfg.C, prob.t
    D, Q2, q1, sign = prob.D, prob.Q2, prob.q1, prob.sign
    lo1, hi1 = prob.V1.support
    lo2, hi2 = prob.V2.support
    k = c0 * c
    L1, L2 = c / D, c / Q2

    def grid_transform(n1: int, n2: int) -> np.ndarray:
        x = lo1 + L1 * np.arange(n1) / n1
        y = lo2 + L2 * np.arange(n2) / n2
        acc = np.zeros((n1, n2), dtype=complex)
        for j1 in range(int(math.ceil((hi1 - lo1) / L1)) + 1):
            for j2 in range(int(math.ceil((hi2 - lo2) / L2)) + 1):
                xx = (x + j1 * L1)[:, None]
                yy = (y + j2 * L2)[None, :]
                g = prob.V1(xx) * prob.V2(yy)
                g = g * prob.cfg.h(k / C, (n + sign * D * q1 * Q2 * xx * yy) / (k * C))
                if n != 0:
                    g = g * np.exp(2j * t * (math.log(abs(n)) - np.log(D * q1 * Q2 * xx * yy)))
                acc += g
        spec = np.fft.ifft2(acc) * (L1 * L2)
        a = np.arange(-rd, rd + 1)
        b = np.arange(-rq, rq + 1)
        phase = np.exp(2j * math.pi * (a[:, None] * lo1 / L1 + b[None, :] * lo2 / L2))
        return spec[np.ix_(a % n1, b % n2)] * phase

    n1 = max(64, 1 << int(math.ceil(math.log2(4 * rd + 8))))
    n2 = max(64, 1 << int(math.ceil(math.log2(4 * rq + 8))))
    prev = grid_transform(n1, n2)
    while True:
        n1, n2 = 2 * n1, 2 * n2
        cur = grid_transform(n1, n2)
        e = float(np.max(np.abs(cur - prev)))
        if e <= rel_tol * max(float(np.max(np.abs(cur))), 1e-300) or n1 > 1 << 12:
            break
        prev = cur
    a = np.arange(-rd, rd + 1) % c
    b = np.arange(-rq, rq + 1) % c
    fold = np.zeros((c, c), dtype=complex)
    np.add.at(fold, (a[:, None], b[None, :]), cur)
    u = units(c)
    r = np.arange(c)
    if kern == "closed":
        prod_idx = (r[:, None] * r[None, :]) % c
        m = np.bincount(prod_idx.ravel(), weights=fold.real.ravel(), minlength=c) + 1j * np.bincount(
            prod_idx.ravel(), weights=fold.imag.ravel(), minlength=c
        )
        theta = (-sign * mod_inverse(q1, c) * unit_inverses(c)) % c
        m_tilde = np.fft.ifft(m) * c
        hvals = m_tilde[theta]
    else:
        f_hat = np.fft.fft(fold, axis=0)  # sum_delta1 fold e(-delta1 gamma/c)
        idx = (sign * q1 * u[:, None] * r[None, :]) % c
        hvals = f_hat[r[None, :], idx].sum(axis=1)
    return complex(np.sum(e_mod(n * u, c) * hvals)), e


def s1_simplified(
    n: int,
    q1: int,
    D: float,
    Q2: float,
    V1,
    V2,
    t: float,
    cfg: DeltaConfig,
    c_threshold: float,
    sign: int = 1,
    **kwargs,
) -> S1Evaluation:
    prob = SplitProblem(q1, D, Q2, V1, V2, t, cfg, c_threshold, sign)
    return s1_simplified_many([n], prob, **kwargs)
