"""Smooth compactly supported weight functions.

Every window is a vectorized callable with a ``support`` interval outside of
which it is exactly zero, and an inertness scale ``Z`` bounding the growth of
its scaled derivatives (``x^j f^(j)(x) << Z^j``) on that support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


def _psi(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t) -> np.ndarray:
    """C-infinity transition: 0 for t <= 0, 1 for t >= 1, all derivatives flat at both ends."""
    t = np.asarray(t, dtype=float)
    a, b = _psi(t), _psi(1.0 - t)
    return a / (a + b)


def _bump(s: np.ndarray, sharpness: float) -> np.ndarray:
    """``exp(p - p/(1 - s^2))`` on ``|s| < 1``; peak value 1."""
    out = np.zeros_like(s)
    m = np.abs(s) < 1
    out[m] = np.exp(sharpness - sharpness / (1.0 - s[m] ** 2))
    return out


class BumpKind(Enum):
    PlateauU = "PlateauU"
    AnnulusW = "AnnulusW"


@dataclass(frozen=True)
class BumpFunction:
    """The two fixed kernels of the delta decomposition.

    ``PlateauU`` is 1 on ``[-2, 2]`` and vanishes outside ``[-3, 3]``;
    ``AnnulusW`` is a bump on ``1 < |x| < 2``.
    """

    kind: BumpKind

    @property
    def support(self) -> tuple[float, float]:
        return (-3.0, 3.0) if self.kind is BumpKind.PlateauU else (-2.0, 2.0)

    @property
    def Z(self) -> float:
        return 4.0

    def __call__(self, x):
        x = np.abs(np.asarray(x, dtype=float))
        if self.kind is BumpKind.PlateauU:
            return smooth_step(3.0 - x)
        out = np.zeros_like(x)
        m = (x > 1) & (x < 2)
        out[m] = np.exp(-1.0 / (1.0 - (2.0 * x[m] - 3.0) ** 2))
        return out


PLATEAU_U = BumpFunction(BumpKind.PlateauU)
ANNULUS_W = BumpFunction(BumpKind.AnnulusW)


def eval_bump(f: BumpFunction, x):
    v = f(x)
    return float(v) if np.ndim(v) == 0 else v


@dataclass(frozen=True)
class Bump:
    """Bump supported on ``(lo, hi)``; with ``sqrt_scale`` the profile is a bump in ``sqrt(x)``."""

    lo: float
    hi: float
    sharpness: float = 1.0
    sqrt_scale: bool = False
    Z: float = 4.0

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError("need lo < hi")
        if self.sqrt_scale and self.lo < 0:
            raise ValueError("sqrt-scaled bump needs lo >= 0")

    @property
    def support(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.sqrt_scale:
            a, b = math.sqrt(self.lo), math.sqrt(self.hi)
            u = np.sqrt(np.clip(x, 0.0, None))
            s = (2.0 * u - (a + b)) / (b - a)
            s = np.where(x < 0, 2.0, s)
        else:
            s = (2.0 * x - (self.lo + self.hi)) / (self.hi - self.lo)
        return _bump(s, self.sharpness)


@dataclass(frozen=True)
class Plateau:
    """Equal to 1 on ``[inner_lo, inner_hi]``, zero outside ``(outer_lo, outer_hi)``."""

    inner_lo: float
    inner_hi: float
    outer_lo: float
    outer_hi: float
    Z: float = 8.0

    def __post_init__(self):
        if not (self.outer_lo < self.inner_lo <= self.inner_hi < self.outer_hi):
            raise ValueError("need outer_lo < inner_lo <= inner_hi < outer_hi")

    @property
    def support(self) -> tuple[float, float]:
        return (self.outer_lo, self.outer_hi)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        up = smooth_step((x - self.outer_lo) / (self.inner_lo - self.outer_lo))
        down = smooth_step((self.outer_hi - x) / (self.outer_hi - self.inner_hi))
        return up * down


@dataclass(frozen=True)
class SqrtPlateauU:
    """``U(kappa (sqrt(y) - center))``: the plateau kernel pulled back to a window on ``y > 0``."""

    center: float = 1.1
    kappa: float = 5.0
    Z: float = 8.0

    @property
    def support(self) -> tuple[float, float]:
        lo = max(self.center - 3.0 / self.kappa, 0.0)
        return (lo * lo, (self.center + 3.0 / self.kappa) ** 2)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        u = np.sqrt(np.clip(y, 0.0, None))
        return np.where(y > 0, PLATEAU_U(self.kappa * (u - self.center)), 0.0)


def annulus_window() -> Bump:
    """Positive half of the annulus kernel: same profile, support ``(1, 2)``."""
    return Bump(1.0, 2.0, sharpness=1.0)


def voronoi_window() -> Bump:
    """Window used for the Voronoi checks: a sharp bump in ``sqrt(y)`` over ``y`` in ``(0.25, 2.89)``.

    Bumping in ``sqrt(y)`` matches the ``sqrt(n X y)`` phase of the Bessel kernel,
    so the dual terms decay quickly past the truncation radius.
    """
    return Bump(0.25, 2.89, sharpness=4.0, sqrt_scale=True, Z=8.0)


@dataclass(frozen=True)
class Indicator:
    """Sharp cutoff ``1_[lo, hi]``; only used for integer ranges like ``[Q2, 2 Q2]``."""

    lo: float
    hi: float
    Z: float = math.inf

    @property
    def support(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return ((x >= self.lo) & (x <= self.hi)).astype(float)


@dataclass(frozen=True)
class Product:
    """Pointwise product of two windows; support is the intersection."""

    f: object
    g: object

    @property
    def support(self) -> tuple[float, float]:
        a, b = self.f.support
        c, d = self.g.support
        return (max(a, c), max(min(b, d), max(a, c)))

    @property
    def Z(self) -> float:
        return getattr(self.f, "Z", 4.0) + getattr(self.g, "Z", 4.0)

    def __call__(self, x):
        return self.f(x) * self.g(x)


@dataclass(frozen=True)
class Reflected:
    """``x -> f(-x)``."""

    f: object

    @property
    def support(self) -> tuple[float, float]:
        a, b = self.f.support
        return (-b, -a)

    @property
    def Z(self) -> float:
        return getattr(self.f, "Z", 4.0)

    def __call__(self, x):
        return self.f(-np.asarray(x, dtype=float))


@dataclass(frozen=True)
class DyadicPiece:
    """``g(x / 2^(j+1)) - g(x / 2^j)`` with ``g`` the smooth cutoff (1 below 1, 0 above 2).

    Supported in ``[2^j, 2^(j+2)]``; the pieces for ``j0 <= j <= j1`` sum to
    ``g(x / 2^(j1+1)) - g(x / 2^j0)``, which is 1 on ``[2^(j0+1), 2^(j1+1)]``.
    """

    j: int
    Z: float = 8.0

    @property
    def support(self) -> tuple[float, float]:
        return (2.0**self.j, 2.0 ** (self.j + 2))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return smooth_step(2.0 - x / 2.0 ** (self.j + 1)) - smooth_step(2.0 - x / 2.0**self.j)
