"""Bessel functions of the first kind, integer order.

Moderate arguments use Miller's backward recurrence normalized by
``J_0 + 2 sum J_2k = 1``; large arguments use the Hankel asymptotic expansion,
which for ``x >= max(50, nu^2 / 2)`` reaches its smallest term far below double
precision.
"""

from __future__ import annotations

import math

import numpy as np

MAX_ORDER = 64
MAX_ARG = 1e6
_RESCALE = 1e250


def hankel_switch(order: int) -> float:
    return max(50.0, order * order / 2.0)


def _miller(order: int, x: np.ndarray) -> np.ndarray:
    top = max(order, float(np.max(x)))
    start = int(top + math.sqrt(160.0 * max(top, 1.0)) + 20)
    start += start % 2
    jp1 = np.zeros_like(x)
    j = np.full_like(x, 1e-30)
    total = np.zeros_like(x)
    result = np.zeros_like(x)
    two_over_x = 2.0 / x
    for k in range(start, 0, -1):
        jm1 = k * two_over_x * j - jp1
        jp1, j = j, jm1
        if k - 1 == order:
            result = j.copy()
        if (k - 1) % 2 == 0 and k - 1 > 0:
            total += 2.0 * j
        big = np.abs(j) > _RESCALE
        if big.any():
            s = np.where(big, 1.0 / _RESCALE, 1.0)
            j *= s
            jp1 *= s
            total *= s
            result *= s
    total += j
    return result / total


def _hankel(order: int, x: np.ndarray) -> np.ndarray:
    mu = 4.0 * order * order
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    prev = np.full_like(x, np.inf)
    for k in range(1, 120):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = np.abs(term)
        active &= mag < prev
        prev = mag
        contrib = np.where(active, term, 0.0)
        if k % 2:
            q += contrib * (1 if (k // 2) % 2 == 0 else -1)
        else:
            p += contrib * (1 if (k // 2) % 2 == 0 else -1)
        if not np.any(active & (mag > 1e-18 * np.abs(p))):
            break
    omega = x - (order / 2.0 + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(omega) - q * np.sin(omega))


def bessel_j(order: int, x):
    """``J_order(x)`` for integer ``0 <= order <= 64`` and ``0 <= x <= 1e6`` (vectorized in ``x``)."""
    if not (isinstance(order, (int, np.integer)) and 0 <= order <= MAX_ORDER):
        raise ValueError(f"order must be an integer in [0, {MAX_ORDER}]")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(arr > MAX_ARG) or not np.all(np.isfinite(arr)):
        raise ValueError(f"argument must lie in [0, {MAX_ARG:g}]")
    flat = arr.ravel()
    out = np.zeros_like(flat)
    out[flat == 0] = 1.0 if order == 0 else 0.0
    sw = hankel_switch(order)
    small = (flat > 0) & (flat < sw)
    large = flat >= sw
    if small.any():
        out[small] = _miller(order, flat[small])
    if large.any():
        out[large] = _hankel(order, flat[large])
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)
