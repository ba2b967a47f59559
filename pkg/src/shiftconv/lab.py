"""Experiment harness: averaged shifted sums, factorable shift sets, sweeps and fits."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .arith import primes_up_to
from .coeffs import FourierCoefficientTable, GL3CoefficientTable, build_gl2_table, build_sym2_table, lam_extended
from .delta import STANDARD_PHI, hyperbola_split
from .errors import ConfigError, DegenerateFit, EmptyShiftSet, EmptySupport, TableTooSmall
from .windows import PLATEAU_U, Bump, DyadicPiece, Indicator, Product, Reflected, annulus_window

CSV_COLUMNS = ("X", "H_size", "re_D", "im_D", "abs_majorant", "theorem_rhs", "wall_time_ms")
_BLOCK = 1 << 22  # matrix entries per chunk in the direct sum


@dataclass(frozen=True)
class ShiftSpec:
    """Shift set with weights; ``h`` is strictly increasing and every weight is nonzero."""

    h: np.ndarray
    a: np.ndarray
    ell: int = 0
    description: str = ""

    def __post_init__(self):
        h = np.asarray(self.h, dtype=np.int64)
        a = np.asarray(self.a, dtype=complex)
        if h.shape != a.shape or h.ndim != 1:
            raise ValueError("h and a must be matching 1-d arrays")
        order = np.argsort(h, kind="stable")
        h, a = h[order], a[order]
        if h.size > 1 and np.any(np.diff(h) == 0):
            raise ValueError("shifts must be distinct")
        keep = a != 0
        h, a = h[keep], a[keep]
        h.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "a", a)

    @classmethod
    def from_pairs(cls, pairs, ell: int = 0, description: str = "") -> "ShiftSpec":
        acc: dict[int, complex] = {}
        for h, a in pairs:
            acc[int(h)] = acc.get(int(h), 0j) + complex(a)
        hs = sorted(acc)
        return cls(np.array(hs, dtype=np.int64), np.array([acc[h] for h in hs], dtype=complex), ell, description)

    @classmethod
    def interval(cls, ell: int, length: int, weights=None, description: str = "") -> "ShiftSpec":
        """``ell + [0, length]`` with the given weights (default 1)."""
        h = ell + np.arange(length + 1, dtype=np.int64)
        a = np.ones(h.size, dtype=complex) if weights is None else np.asarray(weights, dtype=complex)
        return cls(h, a, ell, description or f"interval {ell}+[0,{length}]")

    @property
    def size(self) -> int:
        return int(self.h.size)

    @property
    def norm2(self) -> float:
        return float(np.linalg.norm(self.a))

    @property
    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.a))) if self.size else 0.0


def _window_points(V, X: float) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = V.support
    m = np.arange(max(1, math.floor(lo * X)), math.ceil(hi * X) + 1)
    v = V(m / X)
    keep = v != 0
    return m[keep], v[keep]


def per_shift_sums(gl2, gl3, h, r: int, X: float, V, phi=None, Y: float | None = None):
    """``(S(h), |S|(h))`` with ``S(h) = sum_m A(1,m) lambda(rm+h) V(m/X) [phi((rm+h)/Y)]``.

    ``|S|`` is the same sum with every term replaced by its absolute value.
    """
    h = np.asarray(h, dtype=np.int64)
    m, v = _window_points(V, X)
    if m.size == 0 or h.size == 0:
        return np.zeros(h.size), np.zeros(h.size)
    if m[-1] >= gl3.row.size:
        raise TableTooSmall(f"need A(1, m) up to {m[-1]}, table has {gl3.row.size - 1}")
    top = r * int(m[-1]) + int(h.max())
    if top > gl2.bound:
        raise TableTooSmall(f"need lambda up to {top}, table has {gl2.bound}")
    w = gl3.a1(m) * v
    rm = r * m
    out = np.empty(h.size)
    mag = np.empty(h.size)
    step = max(1, _BLOCK // m.size)
    for s in range(0, h.size, step):
        n = rm[:, None] + h[None, s : s + step]
        lam = lam_extended(gl2, n)
        if phi is not None:
            lam = lam * phi(n / Y)
        out[s : s + step] = w @ lam
        mag[s : s + step] = np.abs(w) @ np.abs(lam)
    return out, mag


def shifted_sum_direct(gl2, gl3, spec: ShiftSpec, r: int, X: float, V, phi=None, Y: float | None = None) -> complex:
    """``(1/|H|) sum_h a(h) sum_m A(1,m) lambda(rm+h) V(m/X)``; ``phi`` optionally damps ``rm + h`` at scale ``Y``."""
    value, _ = shifted_sum_with_majorant(gl2, gl3, spec, r, X, V, phi, Y)
    return value


def shifted_sum_with_majorant(gl2, gl3, spec: ShiftSpec, r: int, X: float, V, phi=None, Y=None) -> tuple[complex, float]:
    if spec.size == 0:
        raise EmptyShiftSet("shift set is empty")
    if r < 1:
        raise ValueError("r must be positive")
    s, mag = per_shift_sums(gl2, gl3, spec.h, r, X, V, phi, Y)
    return complex(spec.a @ s) / spec.size, float(np.abs(spec.a) @ mag) / spec.size


# --- factorable shift sets ------------------------------------------------------


class Q1Mode(str, enum.Enum):
    ONE = "One"
    PRIMES = "PrimesIn"


def q1_set(Q1: float, mode: Q1Mode | str) -> np.ndarray:
    mode = Q1Mode(mode)
    if mode is Q1Mode.ONE:
        return np.array([1], dtype=np.int64)
    if Q1 < 2:
        raise ValueError("primes in [Q1, 2 Q1] need Q1 >= 2")
    p = primes_up_to(math.floor(2 * Q1))
    return p[p >= Q1]


def _positive_lattice(V, scale: float) -> np.ndarray:
    lo, hi = V.support
    k = np.arange(max(1, math.floor(lo * scale)), math.ceil(hi * scale) + 1)
    return k[V(k / scale) != 0] if k.size else k


def build_factorable_shifts(
    ell: int,
    D: float,
    Q1: float,
    q1_mode,
    Q2: float,
    aprime=None,
    sign: int = 1,
    V1=None,
    V2=None,
) -> ShiftSpec:
    """Weights ``a(h) = sum_{sign d q1 q2 = h - ell} V1(d/D) V2(q2/Q2) a'(q1)`` over ``d, q2 >= 1``.

    ``aprime`` maps ``q1`` to its weight (a mapping or a callable; default 1).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if D <= 0 or Q2 <= 0:
        raise ValueError("D and Q2 must be positive")
    V1 = V1 if V1 is not None else Bump(1.0, 2.0)
    V2 = V2 if V2 is not None else Bump(1.0, 2.0)
    q1s = q1_set(Q1, q1_mode)
    d = _positive_lattice(V1, D)
    q2 = _positive_lattice(V2, Q2)
    if d.size == 0 or q2.size == 0 or q1s.size == 0:
        raise EmptySupport("windows admit no lattice points")
    if aprime is None:
        wq1 = np.ones(q1s.size)
    elif callable(aprime):
        wq1 = np.array([complex(aprime(int(q))) for q in q1s])
    else:
        wq1 = np.array([complex(aprime.get(int(q), 0)) for q in q1s])
    base = np.multiply.outer(V1(d / D), V2(q2 / Q2))  # [d, q2]
    prod = np.multiply.outer(d, q2)
    hs, ws = [], []
    for q, wq in zip(q1s.tolist(), wq1.tolist()):
        if wq == 0:
            continue
        hs.append((ell + sign * q * prod).ravel())
        ws.append((wq * base).ravel())
    if not hs:
        raise EmptySupport("all q1 weights vanish")
    h = np.concatenate(hs)
    w = np.concatenate(ws).astype(complex)
    uniq, inv = np.unique(h, return_inverse=True)
    a = np.bincount(inv, weights=w.real) + 1j * np.bincount(inv, weights=w.imag)
    spec = ShiftSpec(uniq, a, ell, f"factorable sign={sign:+d} D={D:g} Q1={Q1:g} Q2={Q2:g} q1={Q1Mode(q1_mode).value}")
    if spec.size == 0:
        raise EmptySupport("all weights cancel")
    return spec


def regime_flags(X: float, eps: float, D: float, Q1: float, Q2: float, H_size: int | None = None) -> dict:
    thr = X ** (0.5 + eps)
    flags = {"Q1Q2_large": Q1 * Q2 >= thr, "D_plus_Q1_large": D + Q1 >= thr}
    if H_size is not None:
        flags["H_large"] = H_size >= D * Q1 * Q2 * X ** (-eps)
    return flags


# --- theorem right-hand sides ---------------------------------------------------


def congruence_sup_counts(h: np.ndarray, bmax: int) -> np.ndarray:
    """``out[b - 1] = max_h #{h' in H : h' = h mod b}`` for ``1 <= b <= bmax``."""
    h = np.asarray(h, dtype=np.int64)
    out = np.zeros(max(bmax, 0), dtype=np.int64)
    for b in range(1, bmax + 1):
        out[b - 1] = np.bincount(h % b, minlength=b).max()
    return out


def theorem_rhs_12(spec: ShiftSpec, X: float, eps: float, a_norm2: float | None = None) -> float:
    """``X^(3/4+eps) / |H| * ||a||_2 * (sum_{b <= X^(1/2+eps)} sup-count(b))^(1/2)`` with constant 1."""
    if spec.size == 0:
        raise EmptyShiftSet("shift set is empty")
    a_norm2 = spec.norm2 if a_norm2 is None else a_norm2
    counts = congruence_sup_counts(spec.h, math.floor(X ** (0.5 + eps)))
    return X ** (0.75 + eps) / spec.size * a_norm2 * math.sqrt(float(counts.sum()))


def theorem_rhs_13(spec: ShiftSpec, X: float, eps: float, D: float, Q1: float, Q2: float, A: float = 1.0) -> float:
    """Factorable bound with constant 1: ``X^(-A)`` when ``D + Q1 >= X^(1/2+eps)``, else the square-root bound."""
    if spec.size == 0:
        raise EmptyShiftSet("shift set is empty")
    if D + Q1 >= X ** (0.5 + eps):
        return X ** (-A)
    return X ** (1 + eps) / math.sqrt(spec.size) * math.sqrt(1 + math.sqrt(X) * Q1 / (D * Q2)) * spec.norm_inf


# --- experiment configuration ---------------------------------------------------


class ShiftMode(str, enum.Enum):
    INTERVAL = "Interval"
    FACTORABLE = "Factorable"
    EXPLICIT = "Explicit"


@dataclass(frozen=True)
class FactorableParams:
    D: float
    Q1: float
    Q2: float
    q1_mode: str = "One"
    aprime: dict | None = None
    sign: int = 1


_WEIGHT_RULES = ("unit", "random_phase")


@dataclass(frozen=True)
class ExperimentConfig:
    X_grid: tuple
    r: int = 1
    ell: int = 0
    shift_mode: str = "Interval"
    interval_length_exponent: float | None = None
    factorable: FactorableParams | None = None
    shifts: tuple | None = None
    weights: str = "unit"
    eps: float = 0.1
    seed: int = 0
    output_path: str = "sweep.csv"
    timings: bool = True

    def __post_init__(self):
        grid = tuple(float(x) for x in self.X_grid)
        object.__setattr__(self, "X_grid", grid)
        if not grid or any(x <= 0 for x in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("X_grid must be a nonempty strictly increasing sequence of positive reals")
        if not isinstance(self.r, int) or self.r < 1:
            raise ConfigError("r must be a positive integer")
        try:
            mode = ShiftMode(self.shift_mode)
        except ValueError:
            raise ConfigError(f"unknown shift_mode {self.shift_mode!r}") from None
        if (self.factorable is not None) != (mode is ShiftMode.FACTORABLE):
            raise ConfigError("factorable must be present exactly when shift_mode is Factorable")
        if (self.shifts is not None) != (mode is ShiftMode.EXPLICIT):
            raise ConfigError("shifts must be present exactly when shift_mode is Explicit")
        if self.factorable is not None:
            f = self.factorable
            if f.D <= 0 or f.Q1 <= 0 or f.Q2 <= 0 or f.sign not in (1, -1):
                raise ConfigError("factorable needs positive D, Q1, Q2 and sign +-1")
            try:
                Q1Mode(f.q1_mode)
            except ValueError:
                raise ConfigError(f"unknown q1_mode {f.q1_mode!r}") from None
        if self.eps <= 0:
            raise ConfigError("eps must be positive")
        if self.weights not in _WEIGHT_RULES:
            raise ConfigError(f"weights must be one of {_WEIGHT_RULES}")
        if not -(1 << 63) <= int(self.seed) < 1 << 64:
            raise ConfigError("seed must fit in 64 bits")

    @property
    def mode(self) -> ShiftMode:
        return ShiftMode(self.shift_mode)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "X_grid" not in data:
            raise ConfigError("X_grid is required")
        data = dict(data)
        fac = data.get("factorable")
        if fac is not None:
            if not isinstance(fac, dict):
                raise ConfigError("factorable must be an object")
            fknown = set(FactorableParams.__dataclass_fields__)
            if set(fac) - fknown:
                raise ConfigError(f"unknown factorable keys: {sorted(set(fac) - fknown)}")
            try:
                aprime = fac.get("aprime")
                if aprime is not None:
                    aprime = {int(k): v for k, v in aprime.items()}
                data["factorable"] = FactorableParams(**{**fac, "aprime": aprime})
            except (TypeError, ValueError, AttributeError) as exc:
                raise ConfigError(f"bad factorable block: {exc}") from None
        if data.get("shifts") is not None:
            try:
                data["shifts"] = tuple((int(h), _parse_complex(a)) for h, a in data["shifts"])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"shifts must be [h, a] pairs: {exc}") from None
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["X_grid"] = list(self.X_grid)
        if self.shifts is not None:
            d["shifts"] = [[h, [a.real, a.imag]] for h, a in self.shifts]
        return d


def _parse_complex(a) -> complex:
    if isinstance(a, (list, tuple)):
        re, im = a
        return complex(float(re), float(im))
    return complex(float(a))


@dataclass(frozen=True)
class SweepRecord:
    X: float
    H_size: int
    D_aH: complex
    abs_majorant: float
    theorem_rhs: float
    wall_time_ms: int
    flags: dict = field(default_factory=dict, compare=False)


def experiment_window():
    return annulus_window()


def shifts_for(cfg: ExperimentConfig, X: float) -> ShiftSpec:
    mode = cfg.mode
    if mode is ShiftMode.EXPLICIT:
        return ShiftSpec.from_pairs(cfg.shifts, cfg.ell, "explicit")
    if mode is ShiftMode.FACTORABLE:
        f = cfg.factorable
        return build_factorable_shifts(cfg.ell, f.D, f.Q1, f.q1_mode, f.Q2, f.aprime, f.sign)
    theta = cfg.interval_length_exponent if cfg.interval_length_exponent is not None else 0.5 + cfg.eps
    length = math.ceil(X**theta)
    weights = None
    if cfg.weights == "random_phase":
        # one stream per grid point, so adding X values never perturbs the others
        rng = np.random.default_rng([int(cfg.seed) & ((1 << 64) - 1), int(round(X * 1000))])
        weights = np.exp(2j * math.pi * rng.random(length + 1))
    return ShiftSpec.interval(cfg.ell, length, weights)


def tables_for(cfg: ExperimentConfig, gl2: FourierCoefficientTable | None = None):
    """GL(2) and GL(3) tables large enough for every grid point."""
    V = experiment_window()
    Xmax = cfg.X_grid[-1]
    mmax = math.ceil(V.support[1] * Xmax)
    hmax = max(int(shifts_for(cfg, X).h.max()) for X in cfg.X_grid)
    need = max(cfg.r * mmax + hmax, mmax, 1)
    if gl2 is None or gl2.bound < need:
        gl2 = build_gl2_table(need)
    return gl2, build_sym2_table(gl2, 1, mmax)


def sweep_point(cfg: ExperimentConfig, X: float, gl2, gl3) -> SweepRecord:
    start = time.perf_counter()
    spec = shifts_for(cfg, X)
    value, majorant = shifted_sum_with_majorant(gl2, gl3, spec, cfg.r, X, experiment_window())
    flags = {}
    if cfg.mode is ShiftMode.FACTORABLE:
        f = cfg.factorable
        rhs = theorem_rhs_13(spec, X, cfg.eps, f.D, f.Q1, f.Q2)
        flags = regime_flags(X, cfg.eps, f.D, f.Q1, f.Q2, spec.size)
    else:
        rhs = theorem_rhs_12(spec, X, cfg.eps)
    ms = int(round((time.perf_counter() - start) * 1000)) if cfg.timings else 0
    return SweepRecord(X, spec.size, value, majorant, rhs, ms, flags)


def sweep_experiment(cfg: ExperimentConfig, tables=None, write: bool = True) -> list[SweepRecord]:
    """One record per grid point, in grid order; writes the CSV and a ``.meta.json`` sidecar when ``write``."""
    gl2, gl3 = tables if tables is not None else tables_for(cfg)
    records = [sweep_point(cfg, X, gl2, gl3) for X in cfg.X_grid]
    if write:
        write_sweep(cfg, records)
    return records


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def sweep_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow(
            [_fmt(rec.X), rec.H_size, _fmt(rec.D_aH.real), _fmt(rec.D_aH.imag), _fmt(rec.abs_majorant), _fmt(rec.theorem_rhs), rec.wall_time_ms]
        )
    return buf.getvalue()


def write_sweep(cfg: ExperimentConfig, records) -> Path:
    path = Path(cfg.output_path)
    path.write_text(sweep_csv(records))
    meta = {
        "config": cfg.to_dict(),
        "flags": [{"X": rec.X, **{k: bool(v) for k, v in rec.flags.items()}} for rec in records],
        "triangle_ok": all(triangle_ok(rec) for rec in records),
    }
    Path(str(path) + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def read_sweep_csv(text: str) -> list[SweepRecord]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return [
        SweepRecord(
            float(r["X"]),
            int(r["H_size"]),
            complex(float(r["re_D"]), float(r["im_D"])),
            float(r["abs_majorant"]),
            float(r["theorem_rhs"]),
            int(r["wall_time_ms"]),
        )
        for r in rows
    ]


def triangle_ok(rec: SweepRecord) -> bool:
    return abs(rec.D_aH) <= rec.abs_majorant + 1e-9


def fit_exponent(records, value=None) -> tuple[float, float]:
    """Least-squares slope of ``log|value|`` against ``log X`` and its standard error.

    ``value`` picks the quantity (default ``|D_aH|``); pass e.g.
    ``lambda r: r.abs_majorant`` to fit the majorant instead.
    """
    records = list(records)
    if len(records) < 4:
        raise DegenerateFit("need at least 4 records")
    value = value or (lambda r: abs(r.D_aH))
    y = np.array([float(value(r)) for r in records])
    if np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise DegenerateFit("magnitudes must be positive and finite")
    x = np.log([r.X for r in records])
    y = np.log(y)
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if sxx == 0:
        raise DegenerateFit("X values coincide")
    slope = float(xc @ (y - y.mean())) / sxx
    resid = y - y.mean() - slope * xc
    dof = len(records) - 2
    stderr = math.sqrt(float(resid @ resid) / dof / sxx)
    return slope, stderr


# --- decomposition experiment ----------------------------------------------------


@dataclass(frozen=True)
class DyadicContribution:
    sign: int
    j: int
    D_prime: float
    H_size: int
    value: complex  # D_{a,H}(X) for this piece
    contribution: complex  # its share of the averaged shifted sum


@dataclass(frozen=True)
class MunshiReport:
    X: float
    ell: int
    delta: float
    eps: float
    Q1: float
    Q2: float
    D: float
    q1_set: tuple
    q2_range: tuple
    moduli_count: int
    q1_degenerate: bool
    flags: dict
    main_term: complex
    as_plus: complex
    as_minus: complex
    as_plus_factorable: complex
    as_minus_factorable: complex
    direct: complex
    pieces: tuple
    split_residual: float
    identity_residual: float
    ratio_plus: float
    ratio_minus: float

    def to_dict(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            if isinstance(v, complex):
                v = [v.real, v.imag]
            out[k] = v
        out["pieces"] = [
            {**{k: v for k, v in asdict(p).items() if not isinstance(v, complex)},
             "value": [p.value.real, p.value.imag], "contribution": [p.contribution.real, p.contribution.imag]}
            for p in self.pieces
        ]
        return out


def _rel(res: complex, *terms: complex) -> float:
    scale = max(abs(t) for t in terms)
    return abs(res) / scale if scale else 0.0


def munshi_decomposition_experiment(
    ell: int,
    X: float,
    delta: float,
    tables=None,
    eps: float = 0.1,
    r: int = 1,
    q1_mode: str = "PrimesIn",
    F=PLATEAU_U,
) -> MunshiReport:
    """Split ``D_ell(X)`` over moduli ``q1 q2`` (``q1`` prime near ``X^(1/4)``, ``q1 q2 ~ X^(1/2+delta)``).

    The averaged shifted sums are recomputed independently: ``F`` on ``d >= 1``
    is cut into smooth dyadic pieces, each piece gives a factorable shift set,
    and ``shifted_sum_direct`` evaluates it. The identity residual compares
    ``D_ell`` with the main term minus these recomputed pieces.
    """
    Q1 = X**0.25
    Q2 = X ** (0.5 + delta) / Q1
    D = X ** (1 - eps) / (Q1 * Q2)
    degenerate = Q1Mode(q1_mode) is Q1Mode.PRIMES and Q1 < 2
    q1s = q1_set(Q1, Q1Mode.ONE if degenerate else q1_mode)
    q2s = np.arange(math.ceil(Q2), math.floor(2 * Q2) + 1)
    if q2s.size == 0:
        raise EmptySupport("no integers in [Q2, 2 Q2]")
    moduli = [(int(a) * int(b), 1.0) for a in q1s for b in q2s]
    V = experiment_window()
    Y = r * X + ell
    if tables is None:
        reach = math.ceil(max(abs(x) for x in F.support) * D) * int(q1s.max()) * int(q2s.max())
        need = max(r * math.ceil(V.support[1] * X) + ell + reach, math.ceil(STANDARD_PHI.support[1] * Y)) + 1
        gl2 = build_gl2_table(need)
        gl3 = build_sym2_table(gl2, 1, math.ceil(V.support[1] * X) + 1)
    else:
        gl2, gl3 = tables
    split = hyperbola_split(ell, X, r, moduli, D, F, gl2, gl3, V, STANDARD_PHI, Y)

    # d >= 1 means d/D >= 1/D; choose j0 with 2^(j0+1) <= 1/D and j1 with 2^(j1+1) >= sup |F|
    top = max(abs(x) for x in F.support)
    j0 = math.floor(math.log2(1.0 / D)) - 1
    j1 = math.ceil(math.log2(top)) - 1
    pieces = []
    recon = {1: 0j, -1: 0j}
    for sign in (1, -1):
        # sign +1 pairs lambda(m + ell + dq) with F(-d/D); sign -1 with F(d/D)
        base = Reflected(F) if sign == 1 else F
        for j in range(j0, j1 + 1):
            V1 = Product(base, DyadicPiece(j))
            try:
                spec = build_factorable_shifts(ell, D, Q1, Q1Mode.ONE if degenerate else q1_mode, Q2, None, sign, V1, Indicator(1.0, 2.0))
            except EmptySupport:
                continue
            value = shifted_sum_direct(gl2, gl3, spec, r, X, V, STANDARD_PHI, Y)
            share = value * spec.size / len(moduli)
            recon[sign] += share
            pieces.append(DyadicContribution(sign, j, D * 2.0**j, spec.size, value, share))
    mt, direct = split.main_term, split.direct
    identity = direct - (mt - recon[1] - recon[-1])
    return MunshiReport(
        X=X,
        ell=ell,
        delta=delta,
        eps=eps,
        Q1=Q1,
        Q2=Q2,
        D=D,
        q1_set=tuple(int(q) for q in q1s),
        q2_range=(int(q2s[0]), int(q2s[-1])),
        moduli_count=len(moduli),
        q1_degenerate=degenerate,
        flags=regime_flags(X, eps, D, Q1, Q2),
        main_term=mt,
        as_plus=split.as_plus,
        as_minus=split.as_minus,
        as_plus_factorable=recon[1],
        as_minus_factorable=recon[-1],
        direct=direct,
        pieces=tuple(pieces),
        split_residual=split.relative_residual,
        identity_residual=_rel(identity, direct, mt, recon[1], recon[-1]),
        ratio_plus=abs(recon[1]) / abs(direct) if direct else math.inf,
        ratio_minus=abs(recon[-1]) / abs(direct) if direct else math.inf,
    )
