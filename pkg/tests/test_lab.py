import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftconv.coeffs import build_gl2_table, build_sym2_table
from shiftconv.errors import ConfigError, DegenerateFit, EmptyShiftSet, EmptySupport, TableTooSmall
from shiftconv.lab import (
    CSV_COLUMNS,
    ExperimentConfig,
    ShiftSpec,
    SweepRecord,
    build_factorable_shifts,
    congruence_sup_counts,
    fit_exponent,
    munshi_decomposition_experiment,
    per_shift_sums,
    read_sweep_csv,
    regime_flags,
    shifted_sum_direct,
    shifted_sum_with_majorant,
    sweep_csv,
    sweep_experiment,
    theorem_rhs_12,
    theorem_rhs_13,
    triangle_ok,
)
from shiftconv.windows import Bump, annulus_window

V = annulus_window()


@pytest.fixture(scope="module")
def tables():
    gl2 = build_gl2_table(2000)
    return gl2, build_sym2_table(gl2, 1, 400)


def loop_oracle(gl2, gl3, h, r, X):
    total = 0.0
    for m in range(1, 3 * int(X) + 1):
        v = float(V(m / X))
        if v:
            total += gl3.coeff(1, m) * gl2.lam[r * m + h] * v
    return total


def test_shift_spec_normalizes():
    spec = ShiftSpec(np.array([5, 1, 3]), np.array([1.0, 0.0, 2.0]))
    assert list(spec.h) == [3, 5] and list(spec.a) == [2, 1]
    assert spec.size == 2 and spec.norm2 == pytest.approx(math.sqrt(5)) and spec.norm_inf == 2
    with pytest.raises(ValueError):
        spec.h[0] = 7
    with pytest.raises(ValueError):
        ShiftSpec(np.array([1, 1]), np.array([1.0, 1.0]))
    merged = ShiftSpec.from_pairs([(4, 1), (4, 2j), (2, 1)])
    assert list(merged.h) == [2, 4] and merged.a[1] == 1 + 2j


def test_zero_weights_give_empty_set(tables):
    gl2, gl3 = tables
    spec = ShiftSpec.interval(0, 10, np.zeros(11))
    assert spec.size == 0
    with pytest.raises(EmptyShiftSet):
        shifted_sum_direct(gl2, gl3, spec, 1, 100, V)


@pytest.mark.parametrize("h,r", [(0, 1), (7, 1), (3, 2)])
def test_single_shift_matches_loop(tables, h, r):
    gl2, gl3 = tables
    spec = ShiftSpec.from_pairs([(h, 1)])
    assert shifted_sum_direct(gl2, gl3, spec, r, 100, V) == pytest.approx(loop_oracle(gl2, gl3, h, r, 100), abs=1e-12)


def test_linearity(tables):
    gl2, gl3 = tables
    rng = np.random.default_rng(3)
    h = np.arange(0, 40)
    a = rng.normal(size=40) + 1j * rng.normal(size=40)
    b = rng.normal(size=40)
    both = shifted_sum_direct(gl2, gl3, ShiftSpec(h, a + b), 1, 150, V)
    parts = shifted_sum_direct(gl2, gl3, ShiftSpec(h, a), 1, 150, V) + shifted_sum_direct(gl2, gl3, ShiftSpec(h, b), 1, 150, V)
    assert abs(both - parts) <= 1e-12


def test_majorant_and_table_guards(tables):
    gl2, gl3 = tables
    spec = ShiftSpec.interval(0, 30)
    value, major = shifted_sum_with_majorant(gl2, gl3, spec, 1, 120, V)
    assert abs(value) <= major
    with pytest.raises(TableTooSmall):
        per_shift_sums(gl2, gl3, [5], 1, 300, V)
    with pytest.raises(TableTooSmall):
        per_shift_sums(build_gl2_table(100), gl3, [5], 1, 100, V)
    with pytest.raises(ValueError):
        shifted_sum_direct(gl2, gl3, spec, 0, 100, V)


# --- factorable shifts --------------------------------------------------------------


def test_factorable_empty_support():
    with pytest.raises(EmptySupport):
        build_factorable_shifts(0, 0.5, 1, "One", 0.5, V1=Bump(1.1, 1.9), V2=Bump(1.1, 1.9))
    with pytest.raises(ValueError):
        build_factorable_shifts(0, 4, 1.5, "PrimesIn", 4)


@pytest.mark.parametrize("sign", [1, -1])
def test_factorable_one_mode_counts(sign):
    D, Q2, ell = 6.0, 5.0, 11
    spec = build_factorable_shifts(ell, D, 1, "One", Q2, {1: 1}, sign)
    W = Bump(1.0, 2.0)
    expected = {}
    for d in range(1, 13):
        for q in range(1, 11):
            w = float(W(d / D) * W(q / Q2))
            if w:
                h = ell + sign * d * q
                expected[h] = expected.get(h, 0.0) + w
    assert spec.size == len(expected)
    assert np.allclose(spec.a, [expected[h] for h in spec.h.tolist()], rtol=1e-14)


def test_factorable_primes_and_weights():
    spec = build_factorable_shifts(0, 3.0, 3, "PrimesIn", 3.0, {3: 1.0, 5: 0.0})
    # only q1 = 3 survives: every shift is a multiple of 3
    assert np.all(spec.h % 3 == 0)
    with pytest.raises(EmptySupport):
        build_factorable_shifts(0, 3.0, 3, "PrimesIn", 3.0, lambda q: 0)


def test_regime_flags():
    X, eps = 1024.0, 0.1
    thr = X**0.6
    assert regime_flags(X, eps, thr, 1, 1)["D_plus_Q1_large"]
    assert not regime_flags(X, eps, 1, 1, 1)["D_plus_Q1_large"]
    assert regime_flags(X, eps, 1, 2, thr / 2)["Q1Q2_large"]
    spec = build_factorable_shifts(0, 6.0, 1, "One", 5.0)
    flags = regime_flags(X, eps, 6.0, 1, 5.0, spec.size)
    assert flags["H_large"] == (spec.size >= 30 * X**-eps)
    assert flags["H_large"]


# --- theorem right-hand sides ------------------------------------------------------


def test_rhs_12_singleton():
    X, eps = 400.0, 0.1
    spec = ShiftSpec.from_pairs([(3, 2.0)])
    B = math.floor(X**0.6)
    assert list(congruence_sup_counts(spec.h, B)) == [1] * B
    assert theorem_rhs_12(spec, X, eps) == pytest.approx(X**0.85 * 2.0 * math.sqrt(B))


@pytest.mark.parametrize("X", [256.0, 1024.0, 4096.0])
def test_rhs_12_interval_collapses(X):
    eps = 0.1
    spec = ShiftSpec.interval(5, math.ceil(X ** (0.5 + eps)))
    simple = X ** (1 + eps) * spec.norm2 / spec.size
    assert simple / 4 <= theorem_rhs_12(spec, X, eps) <= 4 * simple


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 300), st.integers(0, 50), st.integers(1, 60))
def test_interval_sup_counts_are_extremal(length, ell, bmax):
    h = ell + np.arange(length)
    counts = congruence_sup_counts(h, bmax)
    for b in range(1, bmax + 1):
        assert counts[b - 1] in (length // b, -(-length // b))


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, 200), min_size=1, max_size=40), st.integers(1000, 5000))
def test_union_never_decreases_bsum(hs, shift):
    h = np.array(sorted(hs))
    doubled = np.concatenate([h, h + shift])
    assert np.all(congruence_sup_counts(doubled, 40) >= congruence_sup_counts(h, 40))


def test_rhs_13_regimes():
    spec = build_factorable_shifts(0, 6.0, 1, "One", 5.0)
    X, eps = 1024.0, 0.1
    assert theorem_rhs_13(spec, X, eps, X**0.6, 1, 5.0) == pytest.approx(1 / X)
    val = theorem_rhs_13(spec, X, eps, 6.0, 1, 5.0)
    assert val == pytest.approx(X**1.1 / math.sqrt(spec.size) * math.sqrt(1 + 32 / 30) * spec.norm_inf)
    with pytest.raises(EmptyShiftSet):
        theorem_rhs_13(ShiftSpec.interval(0, 2, np.zeros(3)), X, eps, 6.0, 1, 5.0)


# --- fitting -------------------------------------------------------------------------


def _records(f):
    return [SweepRecord(X, 1, complex(f(X)), 1.0, 1.0, 0) for X in (2.0**k for k in range(8, 14))]


def test_fit_exponent_synthetic():
    slope, err = fit_exponent(_records(lambda X: X))
    assert abs(slope - 1.0) <= 1e-12 and err <= 1e-12
    slope, _ = fit_exponent(_records(math.sqrt))
    assert abs(slope - 0.5) <= 1e-12
    with pytest.raises(DegenerateFit):
        fit_exponent(_records(lambda X: X)[:3])
    with pytest.raises(DegenerateFit):
        fit_exponent(_records(lambda X: 0.0))
    same = [SweepRecord(5.0, 1, 1j, 1.0, 1.0, 0)] * 4
    with pytest.raises(DegenerateFit):
        fit_exponent(same)


# --- configuration and sweeps ------------------------------------------------------


def test_config_strictness(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"X_grid": [1, 2], "bogus": 1})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"r": 1})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"X_grid": [4, 2]})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"X_grid": [2], "shift_mode": "Factorable"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"X_grid": [2], "factorable": {"D": 1, "Q1": 1, "Q2": 1}})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"X_grid": [2], "shift_mode": "Factorable", "factorable": {"D": 1, "Q1": 1, "Q2": 1, "x": 2}})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"X_grid": [2], "weights": "gaussian"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"X_grid": [2], "r": 0})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"X_grid": [2], "shift_mode": "Explicit", "shifts": [[1]]})
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(ConfigError):
        ExperimentConfig.load(tmp_path / "bad.json")


def test_config_round_trip(tmp_path):
    data = {
        "X_grid": [100, 200],
        "shift_mode": "Explicit",
        "shifts": [[1, [1.0, 0.5]], [4, 2.0]],
        "seed": 9,
        "output_path": str(tmp_path / "o.csv"),
    }
    cfg = ExperimentConfig.from_dict(data)
    again = ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg
    fac = ExperimentConfig.from_dict(
        {"X_grid": [100], "shift_mode": "Factorable", "factorable": {"D": 4, "Q1": 3, "Q2": 2, "q1_mode": "PrimesIn", "aprime": {"3": 2}}}
    )
    assert fac.factorable.aprime == {3: 2}
    assert ExperimentConfig.from_dict(json.loads(json.dumps(fac.to_dict()))) == fac


def test_sweep_csv_is_deterministic(tmp_path):
    out = tmp_path / "s.csv"
    data = {"X_grid": [256, 512, 1024], "weights": "random_phase", "seed": 7, "timings": False, "output_path": str(out)}
    sweep_experiment(ExperimentConfig.from_dict(data))
    first = out.read_bytes()
    meta = json.loads((tmp_path / "s.csv.meta.json").read_text())
    sweep_experiment(ExperimentConfig.from_dict(data))
    assert out.read_bytes() == first
    assert first.decode().splitlines()[0] == ",".join(CSV_COLUMNS)
    assert meta["triangle_ok"] and meta["config"]["seed"] == 7
    records = read_sweep_csv(first.decode())
    assert sweep_csv(records).encode() == first
    assert all(triangle_ok(r) for r in records)
    assert all(math.isfinite(abs(r.D_aH) / r.theorem_rhs) for r in records)


def test_random_phase_streams_are_per_point(tmp_path):
    base = {"X_grid": [256, 512], "weights": "random_phase", "seed": 1, "timings": False}
    short = sweep_experiment(ExperimentConfig.from_dict(base), write=False)
    longer = sweep_experiment(ExperimentConfig.from_dict({**base, "X_grid": [256, 384, 512]}), write=False)
    assert short[0] == longer[0] and short[1] == longer[2]


# golden: worst |D_aH| / majorant measured on this grid
FACTORABLE_GOLDEN = 1.94e-4


def test_factorable_large_regime_cancels():
    cfg = ExperimentConfig.from_dict(
        {
            "X_grid": [256, 512, 1024, 2048],
            "shift_mode": "Factorable",
            "factorable": {"D": 200, "Q1": 1, "Q2": 16, "q1_mode": "One"},
            "timings": False,
        }
    )
    records = sweep_experiment(cfg, write=False)
    ratios = [abs(r.D_aH) / r.abs_majorant for r in records]
    assert all(r.flags["D_plus_Q1_large"] for r in records)
    assert max(ratios) <= 1e-3
    assert max(ratios) == pytest.approx(FACTORABLE_GOLDEN, rel=0.01)
    assert all(r.theorem_rhs == pytest.approx(r.X**-1.0) for r in records)


# --- decomposition experiment --------------------------------------------------------


def test_munshi_degenerate_q1():
    report = munshi_decomposition_experiment(3, 12, 0.05)
    assert report.q1_degenerate and report.q1_set == (1,)
    assert report.identity_residual <= 1e-8
    assert report.split_residual <= 1e-8


def test_munshi_report_is_reproducible():
    a = munshi_decomposition_experiment(5, 300, 0.05)
    b = munshi_decomposition_experiment(5, 300, 0.05)
    assert json.dumps(a.to_dict(), sort_keys=True) == json.dumps(b.to_dict(), sort_keys=True)
    assert not a.q1_degenerate and a.q1_set == (5, 7)
    assert a.identity_residual <= 1e-8
