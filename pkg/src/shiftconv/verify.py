"""Identity verifications shared by the CLI and the test suite.

Each ``verify_*`` function runs one family of checks and returns a
:class:`CheckReport` with the worst observed error, the tolerance it was
held to, and the wall time.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .arith import divisor_count_sieve, factorize, mobius_sieve
from .coeffs import _sym2_prime_powers, build_gl2_table, build_sym2_table
from .delta import (
    DeltaConfig,
    SplitProblem,
    hyperbola_split,
    s1_simplified_many,
    s_split_exact_many,
    twisted_representation_count,
)
from .expsums import (
    CharSumParams,
    c_sum_brute_grid,
    c_sum_closed_grid,
    curly_t_brute_grid,
    curly_t_reduced_grid,
    kloosterman_table,
    weil_majorant,
)
from .voronoi import truncation_radius, voronoi_lhs, voronoi_rhs
from .windows import PLATEAU_U, Bump, annulus_window, voronoi_window


@dataclass
class CheckReport:
    name: str
    max_error: float
    tolerance: float
    seconds: float
    cases: int
    details: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: max error {self.max_error:.3e} (tol {self.tolerance:.0e}), {self.cases} cases, {self.seconds:.2f}s"


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def verify_delta(qs=(1, 2, 3, 5), C: float = 16, D: float = 16, nmax: int = 2000, tol: float = 1e-10) -> CheckReport:
    """``|s1 - s2 - delta(n = 0)|`` over ``|n| <= nmax`` for each ``q``."""
    from .delta import delta_decompose

    worst = 0.0
    with _Timer() as t:
        for q in qs:
            cfg = DeltaConfig(C, D, q)
            for n in range(-nmax, nmax + 1):
                s1, s2 = delta_decompose(n, cfg)
                worst = max(worst, abs(s1 - s2 - (1.0 if n == 0 else 0.0)))
    return CheckReport("delta decomposition", worst, tol, t.seconds, len(qs) * (2 * nmax + 1))


def verify_c_sum(cmax: int = 60, q1s=(1, 2, 3, 5, 7), tol: float = 1e-10) -> CheckReport:
    """Closed Kloosterman form of the congruence-restricted double sum, all ``(n, d, q2)`` mod ``c``."""
    worst, cases = 0.0, 0
    with _Timer() as t:
        for c in range(1, cmax + 1):
            for q1 in q1s:
                if math.gcd(c, q1) != 1:
                    continue
                for sign in (1, -1):
                    diff = np.abs(c_sum_brute_grid(q1, c, sign) - c_sum_closed_grid(q1, c, sign))
                    worst = max(worst, float(diff.max()))
                    cases += c**3
    return CheckReport("character sum closed form", worst, tol, t.seconds, cases)


def verify_curly_t(bmax: int = 12, r0m0_max: int = 4, tol: float = 1e-8) -> CheckReport:
    """Brute force against the divisor-split reduction, relative to the largest value per modulus."""
    worst, cases = 0.0, 0
    with _Timer() as t:
        for bp in range(1, bmax + 1):
            for r0m0 in range(1, r0m0_max + 1):
                for eta1 in (1, -1):
                    for eta2 in (1, -1):
                        p = CharSumParams(1, r0m0, bp, 1, eta1, eta2)
                        b = p.modulus
                        for ell in range(b):
                            brute = curly_t_brute_grid(ell, p)
                            red = curly_t_reduced_grid(ell, p)
                            scale = max(float(np.max(np.abs(brute))), 1.0)
                            worst = max(worst, float(np.max(np.abs(brute - red))) / scale)
                            cases += b**3
    return CheckReport("curly-T reduction", worst, tol, t.seconds, cases)


def verify_weil(cmax: int = 500, per_c: int = 200, seed: int = 20240601, tol: float = 1e-9) -> CheckReport:
    """Largest excess ``|S(a, b; c)| - tau(c) sqrt(c) sqrt(gcd(a, b, c))`` (must stay below ``tol``)."""
    rng = np.random.default_rng(seed)
    worst = -math.inf
    with _Timer() as t:
        for c in range(1, cmax + 1):
            k = kloosterman_table(c)
            a = rng.integers(0, 10 * c + 1, per_c)
            b = rng.integers(0, 10 * c + 1, per_c)
            vals = np.abs(k[a % c, b % c])
            bound = np.array([weil_majorant(int(x), int(y), c) for x, y in zip(a, b)])
            worst = max(worst, float(np.max(vals - bound)))
            kloosterman_table.cache_clear()
    return CheckReport("Weil bound", max(worst, 0.0), tol, t.seconds, cmax * per_c)


def verify_voronoi(cs=(2, 3, 4), Xs=(20, 40, 80), all_units: bool = True, trunc_multiplier: float = 10.0, tol: float = 1e-5, gl2=None) -> CheckReport:
    F = voronoi_window()
    need = max(math.floor(trunc_multiplier * truncation_radius(c, F.Z, X, 0.1)) for c in cs for X in Xs)
    need = max(need, max(math.ceil(F.support[1] * X) for X in Xs))
    gl2 = gl2 if gl2 is not None and gl2.bound >= need else build_gl2_table(need)
    worst, details = 0.0, []
    with _Timer() as t:
        for c in cs:
            units_c = [a for a in range(1, c) if math.gcd(a, c) == 1] if all_units else [1]
            for X in Xs:
                for a in units_c:
                    lhs = voronoi_lhs(gl2, a, c, X, F)
                    rhs = voronoi_rhs(gl2, a, c, X, F, trunc_multiplier=trunc_multiplier)
                    rel = abs(lhs - rhs) / abs(lhs)
                    worst = max(worst, rel)
                    details.append((a, c, X, rel))
    return CheckReport("GL(2) Voronoi", worst, tol, t.seconds, len(details), details)


def hyperbola_grid():
    """Configurations ``(X, ell, r, Q)``: two X, three shifts, two r, two modulus sets."""
    Qs = (((3, 1.0),), ((2, 1.0), (5, 0.5 - 0.25j), (7, 2.0)))
    return [(X, ell, r, Q) for X in (100, 300) for ell in (0, 5, 17) for r in (1, 2) for Q in Qs]


def verify_hyperbola(D: float = 8.0, tol: float = 1e-8, configs=None) -> CheckReport:
    configs = configs if configs is not None else hyperbola_grid()
    V = annulus_window()
    F = PLATEAU_U
    worst, details = 0.0, []
    with _Timer() as t:
        Xmax = max(c[0] for c in configs)
        rmax = max(c[2] for c in configs)
        lmax = max(c[1] for c in configs)
        qmax = max(q for c in configs for q, _ in c[3])
        gl2 = build_gl2_table(math.ceil(2.5 * (rmax * 2 * Xmax + lmax)) + math.ceil(3 * D) * qmax + 2 * rmax * Xmax)
        gl3 = build_sym2_table(gl2, 1, 2 * Xmax + 1)
        for X, ell, r, Q in configs:
            res = hyperbola_split(ell, X, r, Q, D, F, gl2, gl3, V)
            worst = max(worst, res.relative_residual)
            details.append((X, ell, r, len(Q), res.relative_residual))
    return CheckReport("hyperbola split", worst, tol, t.seconds, len(details), details)


def desk_split_problem(q1: int, sign: int = 1) -> SplitProblem:
    """Desk-scale instance: ``D = 4``, ``Q2 = 8``, ``C = 256``, threshold 16, ``t = 0.1``."""
    V = Bump(0.25, 3.0)
    return SplitProblem(q1, 4.0, 8.0, V, V, 0.1, DeltaConfig(256, 256, 1), 16, sign)


def verify_split_exact(q1s=(1, 3), nmax: int = 64, tol: float = 1e-9) -> CheckReport:
    ns = np.arange(-nmax, nmax + 1)
    worst = 0.0
    with _Timer() as t:
        for q1 in q1s:
            for sign in (1, -1):
                prob = desk_split_problem(q1, sign)
                s0, s1 = s_split_exact_many(ns, prob)
                count = np.array([twisted_representation_count(int(n), prob) for n in ns])
                worst = max(worst, float(np.max(np.abs(s0 + s1 - count))))
    return CheckReport("split total vs representation count", worst, tol, t.seconds, len(q1s) * 2 * ns.size)


def verify_split_simplified(q1s=(1, 3), nmax: int = 64, tol: float = 1e-4, signs=(1, -1), **kwargs) -> CheckReport:
    """Post-Poisson ``S1`` against the exact ``S1``, relative per ``n``."""
    ns = np.arange(-nmax, nmax + 1)
    worst, details = 0.0, []
    with _Timer() as t:
        for q1 in q1s:
            for sign in signs:
                prob = desk_split_problem(q1, sign)
                _, exact = s_split_exact_many(ns, prob)
                ev = s1_simplified_many(ns, prob, **kwargs)
                rel = np.abs(ev.values - exact) / np.maximum(np.abs(exact), 1e-300)
                worst = max(worst, float(rel.max()))
                details.append((q1, sign, float(rel.max()), ev.kernel_counts))
    return CheckReport("simplified S1 vs exact", worst, tol, t.seconds, len(details) * ns.size, details)


def verify_ssplit(**kwargs) -> list[CheckReport]:
    return [verify_split_exact(), verify_split_simplified(**kwargs)]


def verify_coefficients(bound: int = 10**5, mobius_bound: int = 100, tol: float = 1e-10) -> list[CheckReport]:
    """Hecke multiplicativity and prime-power recursion, the divisor bound, and the Mobius relation."""
    reports = []
    with _Timer() as t:
        gl2 = build_gl2_table(bound, keep_exact=True)
    tau = gl2.tau
    lam = gl2.lam
    exact_ok = (tau[2], tau[3], tau[5]) == (-24, 252, 4830)
    reports.append(CheckReport("tau(2), tau(3), tau(5)", 0.0 if exact_ok else 1.0, 0.0, t.seconds, 3))

    with _Timer() as t:
        # lambda(m) lambda(n) = sum_{d | (m, n)} lambda(mn / d^2), checked for all m n <= bound
        worst = 0.0
        cases = 0
        for m in range(2, math.isqrt(bound) + 1):
            n = np.arange(m, bound // m + 1)
            lhs = lam[m] * lam[n]
            rhs = np.zeros(n.size)
            for d in range(1, m + 1):
                if m % d:
                    continue
                hit = n % d == 0
                rhs[hit] += lam[(m * n[hit]) // (d * d)]
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
            cases += n.size
        tau0 = divisor_count_sieve(bound)
        excess = float(np.max(np.abs(lam[1:]) - tau0[1:]))
    reports.append(CheckReport("Hecke relations", worst, 1e-9, t.seconds, cases))
    reports.append(CheckReport("divisor bound |lambda| <= tau0", max(excess, 0.0), 0.0, t.seconds, bound))

    with _Timer() as t:
        gl3 = build_sym2_table(gl2, mobius_bound, mobius_bound)
        mu = mobius_sieve(mobius_bound)
        worst = 0.0
        for n1 in range(1, mobius_bound + 1):
            for n2 in range(1, mobius_bound + 1):
                g = math.gcd(n1, n2)
                rhs = sum(mu[d] * gl3.row[n1 // d] * gl3.row[n2 // d] for d in range(1, g + 1) if g % d == 0)
                worst = max(worst, abs(schur_coefficient(gl2, n1, n2) - rhs))
    reports.append(CheckReport("Mobius relation", worst, tol, t.seconds, mobius_bound**2))
    return reports


def schur_coefficient(gl2, m: int, n: int) -> float:
    """``A(m, n)`` of the symmetric-square lift from Schur polynomials, independent of the table builder.

    At ``p``, ``A(p^a, p^b) = s_(a+b, b, 0)(alpha^2, 1, beta^2)``, evaluated by the
    Jacobi-Trudi determinant in complete homogeneous polynomials.
    """
    out = 1.0
    fm, fn = dict(factorize(m).factors), dict(factorize(n).factors)
    for p in sorted(set(fm) | set(fn)):
        a, b = fm.get(p, 0), fn.get(p, 0)
        h = _sym2_prime_powers(float(gl2.lam[p]), a + b + 2)
        lam = (a + b, b, 0)
        mat = np.array(
            [[h[lam[i] - i + j] if lam[i] - i + j >= 0 else 0.0 for j in range(3)] for i in range(3)]
        )
        out *= float(np.linalg.det(mat))
    return out
