"""Voronoi summation for the weight-12 form, checked numerically, plus the
truncation and stationary-phase predicates used to cut dual sums."""

from __future__ import annotations

import math

import numpy as np

from .arith import mod_inverse
from .bessel import bessel_j
from .coeffs import FourierCoefficientTable
from .errors import NotCoprime, TableTooSmall
from .expsums import e_mod
from .quadrature import QuadratureBudget, adaptive_gauss_legendre


def truncation_radius(c: int, Z: float, X: float, eps: float) -> float:
    return c * c * (1.0 + Z * Z) * X ** (-1.0 + eps)


def gl3_truncation_radius(bprime: int, X: float, eps: float) -> float:
    """Bound on ``m0^2 m`` beyond which the GL(3) dual terms are negligible."""
    return bprime**3 * X ** (-1.0 + eps)


def stationary_phase_negligible(min_abs_phase_derivative: float, Z: float, X: float, eps: float) -> bool:
    if min_abs_phase_derivative < 0 or Z <= 0 or X <= 0 or eps < 0:
        raise ValueError("arguments must be nonnegative (Z, X positive)")
    return min_abs_phase_derivative >= Z * X**eps


def _check(a: int, c: int) -> None:
    if c < 1:
        raise ValueError("c must be positive")
    if math.gcd(a, c) != 1:
        raise NotCoprime(f"gcd({a}, {c}) > 1")


def voronoi_lhs(gl2: FourierCoefficientTable, a: int, c: int, X: float, F) -> complex:
    """``sum_n lambda(n) e(an/c) F(n/X)``."""
    _check(a, c)
    lo, hi = F.support
    n = np.arange(max(1, math.floor(lo * X)), math.ceil(hi * X) + 1)
    if n[-1] > gl2.bound:
        raise TableTooSmall(f"need lambda up to {n[-1]}, table has {gl2.bound}")
    w = F(n / X)
    return complex(np.sum(gl2.lam[n] * w * e_mod(a * n, c)))


def hankel_weight(n: int, c: int, X: float, F, budget: QuadratureBudget, order: int) -> complex:
    """``int F(y) J_order(4 pi sqrt(n X y)/c) dy`` with panels seeded per kernel oscillation."""
    lo, hi = F.support
    lo = max(lo, 0.0)
    scale = 4.0 * math.pi * math.sqrt(n * X) / c
    # one seed panel per half oscillation of the kernel in y
    turns = scale * (math.sqrt(hi) - math.sqrt(lo)) / math.pi
    u = np.linspace(math.sqrt(lo), math.sqrt(hi), int(turns) + 2)
    return adaptive_gauss_legendre(
        lambda y: F(y) * bessel_j(order, scale * np.sqrt(y)), lo, hi, budget, breakpoints=u * u
    ).value


def voronoi_rhs(
    gl2: FourierCoefficientTable,
    a: int,
    c: int,
    X: float,
    F,
    budget: QuadratureBudget = QuadratureBudget(rel_tol=1e-12),
    trunc_multiplier: float = 10.0,
    eps: float = 0.1,
    n_max: int | None = None,
    terms: bool = False,
):
    """Dual side ``(X/c) sum_n lambda(n) e(-a-bar n/c) int F(y) 2 pi i^k J_{k-1}(4 pi sqrt(nXy)/c) dy``.

    For a holomorphic form the minus-branch kernel vanishes identically, so only
    the plus branch is summed. The dual sum stops at ``trunc_multiplier`` times
    :func:`truncation_radius` (or at ``n_max`` when given). With ``terms=True``
    the individual dual terms are returned as an array instead of their sum.
    """
    _check(a, c)
    k = gl2.weight
    minus_kernel = 0.0  # J_{-,f} for holomorphic f
    assert minus_kernel == 0.0
    if n_max is None:
        n_max = math.floor(trunc_multiplier * truncation_radius(c, F.Z, X, eps))
    if n_max > gl2.bound:
        raise TableTooSmall(f"dual sum needs lambda up to {n_max}, table has {gl2.bound}")
    abar = mod_inverse(a, c)
    kernel = 2.0 * math.pi * (1j**k)
    out = np.zeros(max(n_max, 0), dtype=complex)
    for n in range(1, n_max + 1):
        integral = hankel_weight(n, c, X, F, budget, k - 1)
        out[n - 1] = gl2.lam[n] * complex(e_mod(-abar * n, c)) * kernel * integral
    out *= X / c
    return out if terms else complex(out.sum())
