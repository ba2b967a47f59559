"""Adaptive Gauss-Legendre quadrature and periodized trapezoid Fourier transforms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import QuadratureFailure

ORDER = 16
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(ORDER)


@dataclass(frozen=True)
class QuadratureBudget:
    rel_tol: float = 1e-10
    max_panels: int = 4096
    abs_floor: float = 0.0

    def __post_init__(self):
        if self.rel_tol <= 0 or self.max_panels < 1 or self.abs_floor < 0:
            raise ValueError("invalid quadrature budget")


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error_estimate: float
    panels: int


def _gl(f, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-panel Gauss-Legendre integrals of ``f`` and of ``|f|``."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    v = f(mid[:, None] + half[:, None] * _NODES[None, :])
    return (v * _WEIGHTS).sum(axis=1) * half, (np.abs(v) * _WEIGHTS).sum(axis=1) * half


def adaptive_gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    budget: QuadratureBudget = QuadratureBudget(),
    breakpoints=None,
) -> QuadResult:
    """Integrate a vectorized ``f`` over ``[a, b]``.

    Each panel is compared against the sum over its two halves; panels whose
    discrepancy exceeds their share of the tolerance are bisected, all at once,
    until the summed discrepancy meets ``max(rel_tol * int |f|, abs_floor)``.
    Measuring against the L1 norm keeps the target meaningful for oscillatory
    integrands whose value is far smaller than their size.
    ``breakpoints`` seeds the initial partition (e.g. one panel per few
    oscillations of the integrand).
    """
    if b <= a:
        return QuadResult(0.0, 0.0, 0)
    edges = np.unique(np.clip(np.asarray(breakpoints if breakpoints is not None else [a, b], float), a, b))
    edges = np.union1d(edges, [a, b])
    lo, hi = edges[:-1], edges[1:]
    done_val = 0j
    done_l1 = 0.0
    done_err = 0.0
    done_count = 0
    while True:
        mid = 0.5 * (lo + hi)
        coarse, _ = _gl(f, lo, hi)
        left, l1_left = _gl(f, lo, mid)
        right, l1_right = _gl(f, mid, hi)
        fine, l1 = left + right, l1_left + l1_right
        err = np.abs(fine - coarse)
        total = done_val + fine.sum()
        tol = max(budget.rel_tol * (done_l1 + l1.sum()), budget.abs_floor)
        if done_err + err.sum() <= tol:
            return QuadResult(complex(total), float(done_err + err.sum()), done_count + lo.size)
        share = tol / max(lo.size + done_count, 1)
        keep = err <= 0.5 * share
        done_val += fine[keep].sum()
        done_l1 += float(l1[keep].sum())
        done_err += float(err[keep].sum())
        done_count += int(keep.sum())
        split = ~keep
        lo_s, hi_s, mid_s = lo[split], hi[split], mid[split]
        if done_count + 2 * lo_s.size > budget.max_panels:
            raise QuadratureFailure(
                f"panel budget {budget.max_panels} exhausted (error {done_err + err.sum():.3e}, tol {tol:.3e})"
            )
        lo = np.concatenate([lo_s, mid_s])
        hi = np.concatenate([mid_s, hi_s])


@dataclass(frozen=True)
class FourierSamples:
    """``values[k + kmax] = integral g(x) e(k x / period) dx`` for ``|k| <= kmax``."""

    values: np.ndarray
    kmax: int
    error_estimate: float
    nodes: int


def _periodized_samples(g, lo: float, hi: float, period: float, nodes: int) -> np.ndarray:
    """Samples of ``sum_j g(x + j period)`` at ``x_k = lo + k period / nodes``, touching only the support."""
    out = np.zeros(nodes, dtype=complex)
    step = period / nodes
    count = int(math.floor((hi - lo) / step)) + 1
    idx = np.arange(count)
    vals = g(lo + idx * step)
    if count > nodes:
        np.add.at(out, idx % nodes, vals)
    else:
        out[:count] = vals
    return out


def _spectrum(samples: np.ndarray, lo: float, period: float, kmax: int) -> np.ndarray:
    nodes = samples.size
    spec = np.fft.ifft(samples) * period  # (period/N) sum_k g(x_k) e(d k/N)
    k = np.arange(-kmax, kmax + 1)
    return spec[k % nodes] * np.exp(2j * math.pi * k * lo / period)


def periodized_fourier(
    g: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    period: float,
    kmax: int,
    rel_tol: float = 1e-12,
    min_nodes: int = 64,
    max_nodes: int = 1 << 22,
) -> FourierSamples:
    """Fourier transform of a smooth ``g`` supported in ``[lo, hi]`` at frequencies ``k/period``.

    The periodization of ``g`` is sampled on a uniform grid; the trapezoid rule
    is spectrally accurate for it, and Poisson summation makes its DFT equal the
    transform at ``k/period``. The error estimate compares against the rule on
    every other node; the grid doubles until that estimate is below
    ``rel_tol`` relative to the largest coefficient.
    """
    nodes = max(min_nodes, 1 << int(math.ceil(math.log2(4 * kmax + 8))))
    while True:
        samples = _periodized_samples(g, lo, hi, period, nodes)
        cur = _spectrum(samples, lo, period, kmax)
        half = _spectrum(samples[::2], lo, period, kmax)
        err = float(np.max(np.abs(cur - half)))
        scale = float(np.max(np.abs(cur))) or 1.0
        if err <= rel_tol * scale:
            return FourierSamples(cur, kmax, err, nodes)
        nodes *= 2
        if nodes > max_nodes:
            raise QuadratureFailure("periodized transform did not converge")
