import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shiftconv.arith import divisor_count, euler_phi, mobius, mod_inverse
from shiftconv.errors import NotCoprime
from shiftconv.expsums import (
    CharSumParams,
    additive_char,
    c_sum_brute,
    c_sum_closed,
    curly_t_bound_shape,
    curly_t_brute,
    curly_t_brute_grid,
    curly_t_reduced,
    curly_t_reduced_grid,
    kloosterman,
    kloosterman_table,
    ramanujan_sum,
    ramanujan_sum_exact,
    s0_sum,
    t_collapsed,
    units,
    weil_majorant,
)


def e(x):
    return cmath.exp(2j * math.pi * x)


def loop_units(q):
    return [a for a in range(q) if math.gcd(a, q) == 1] if q > 1 else [0]


def loop_kloosterman(a, b, c):
    return sum(e((a * x + b * mod_inverse(x, c)) / c) for x in loop_units(c))


def loop_s0(m, n, h, p):
    b = p.modulus
    total = 0j
    for al in loop_units(b):
        ab = mod_inverse(al, b)
        inner = loop_kloosterman(mod_inverse(al * p.rprime, p.bprime) if p.bprime > 1 else 0, p.eta1 * m, p.bprime)
        total += e((al * h + p.eta2 * ab * n) / b) * inner
    return total


def test_additive_char():
    assert additive_char(0, 5) == pytest.approx(1)
    assert abs(additive_char(1, 2) + 1) < 1e-15
    assert abs(additive_char(1, 8) - (math.sqrt(2) / 2) * (1 + 1j)) < 1e-14


@given(st.integers(-10**9, 10**9), st.integers(1, 10**6))
def test_additive_char_unit_modulus(a, q):
    assert abs(abs(additive_char(a, q)) - 1) < 1e-14


def test_ramanujan_examples():
    assert ramanujan_sum(0, 12) == pytest.approx(4)
    assert ramanujan_sum(2, 4) == pytest.approx(-2)
    assert ramanujan_sum(1, 6) == pytest.approx(mobius(6))


def test_ramanujan_integrality():
    for q in range(1, 301):
        assert ramanujan_sum_exact(0, q) == euler_phi(q)
        vals = np.array([ramanujan_sum(n, q) for n in range(-300, 301, 7)])
        assert np.max(np.abs(vals - np.round(vals))) < 1e-9
        assert all(round(ramanujan_sum(n, q)) == ramanujan_sum_exact(n, q) for n in range(-20, 21))


def test_kloosterman_examples():
    assert kloosterman(0, 0, 12) == pytest.approx(euler_phi(12))
    assert kloosterman(1, 1, 2) == pytest.approx(1)
    assert kloosterman(1, 1, 5) == pytest.approx(2 + 2 * math.cos(4 * math.pi / 5), abs=1e-12)
    assert kloosterman(1, 1, 5) == pytest.approx(0.381966, abs=1e-6)


def test_kloosterman_symmetry():
    rng = np.random.default_rng(1)
    for c in range(1, 201):
        for a, b in rng.integers(0, 1000, (5, 2)):
            assert kloosterman(int(a), int(b), c) == pytest.approx(kloosterman(int(b), int(a), c), abs=1e-9)


def test_kloosterman_twisted_multiplicativity():
    rng = np.random.default_rng(2)
    for c1 in range(2, 51, 3):
        for c2 in range(2, 51, 4):
            if math.gcd(c1, c2) != 1:
                continue
            for a, b in rng.integers(0, c1 * c2, (3, 2)):
                a, b = int(a), int(b)
                lhs = kloosterman(a, b, c1 * c2)
                i2, i1 = mod_inverse(c2, c1), mod_inverse(c1, c2)
                rhs = kloosterman(a * i2, b * i2, c1) * kloosterman(a * i1, b * i1, c2)
                assert lhs == pytest.approx(rhs, abs=1e-9)


def test_kloosterman_table_matches_scalar():
    k = kloosterman_table(9)
    assert not k.flags.writeable
    assert all(k[a, b] == pytest.approx(kloosterman(a, b, 9), abs=1e-12) for a in range(9) for b in range(9))


def test_weil_majorant_examples():
    assert weil_majorant(1, 1, 5) == pytest.approx(2 * math.sqrt(5))
    assert weil_majorant(0, 0, 4) == pytest.approx(12)
    assert weil_majorant(6, 4, 12) == pytest.approx(6 * math.sqrt(24))


def test_weil_bound_sampled():
    rng = np.random.default_rng(3)
    for c in range(1, 120):
        for a, b in rng.integers(0, 5 * c, (20, 2)):
            assert abs(kloosterman(int(a), int(b), c)) <= weil_majorant(int(a), int(b), c) + 1e-9


def test_units_cached_readonly():
    u = units(10)
    assert list(u) == [1, 3, 7, 9]
    assert not u.flags.writeable
    assert list(units(1)) == [0]


def test_s0_trivial_modulus():
    assert s0_sum(0, 0, 0, CharSumParams(1, 1, 1)) == pytest.approx(1)


def test_s0_against_loop():
    p = CharSumParams(1, 1, 3, 1, 1, 1)
    assert abs(s0_sum(1, 1, 1, p) - loop_s0(1, 1, 1, p)) < 1e-10
    p = CharSumParams(2, 1, 5, 3, -1, 1)
    for m, n, h in [(1, 2, 3), (0, 1, 4), (7, -2, 5)]:
        assert abs(s0_sum(m, n, h, p) - loop_s0(m, n, h, p)) < 1e-9


@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30), st.sampled_from([1, 2, 3, 4, 6]), st.sampled_from([1, 2]))
@settings(max_examples=40, deadline=None)
def test_s0_symmetries(m, n, h, bp, r0):
    # full negation leaves the sum unchanged; negating (n, h) conjugates it
    p = CharSumParams(r0, 1, bp, 1, 1, 1)
    v = s0_sum(m, n, h, p)
    assert abs(s0_sum(-m, -n, -h, p) - v) < 1e-9
    assert abs(s0_sum(m, -n, -h, p) - v.conjugate()) < 1e-9


def test_charsum_params_validation():
    with pytest.raises(NotCoprime):
        CharSumParams(1, 2, 3, 3)
    with pytest.raises(ValueError):
        CharSumParams(1, 1, 3, 1, eta1=0)


def test_t_collapsed_examples():
    p = CharSumParams(1, 1, 3)
    v = t_collapsed(0, 1, 2, 2, p)
    assert abs(v.imag) < 1e-9 and v.real >= 0
    oracle = sum(loop_s0(g, 1, 1, p) * loop_s0(g, 1, 2, p).conjugate() for g in range(3)) / 3
    assert abs(t_collapsed(0, 1, 1, 2, p) - oracle) < 1e-9
    q = CharSumParams(1, 1, 1)
    assert abs(t_collapsed(0, 3, 1, 2, q) - s0_sum(0, 3, 1, q) * s0_sum(0, 3, 2, q).conjugate()) < 1e-12


def loop_curly_t(ell, n, h1, h2, p):
    b, bp = p.modulus, p.bprime
    total = 0j
    for g in range(bp):
        s1 = s2 = 0j
        for al in loop_units(b):
            ab = mod_inverse(al, b)
            k = loop_kloosterman(ab * mod_inverse(p.rprime, bp) % bp if bp > 1 else 0, p.eta1 * g, bp)
            s1 += e((al * (h1 + ell) + p.eta2 * ab * n) / b) * k
            s2 += e((al * (h2 + ell) + p.eta2 * ab * n) / b) * k
        total += s1 * s2.conjugate()
    return total / bp


def test_curly_t_against_loop():
    p = CharSumParams(1, 1, 3)
    assert abs(curly_t_brute(0, 1, 1, 4, p) - loop_curly_t(0, 1, 1, 4, p)) < 1e-9
    p = CharSumParams(2, 1, 4, 1, -1, -1)
    assert abs(curly_t_brute(3, 5, 1, 6, p) - loop_curly_t(3, 5, 1, 6, p)) < 1e-9


def test_curly_t_diagonal_positive():
    for bp in (2, 3, 5, 7):
        v = curly_t_brute(0, 0, 0, 0, CharSumParams(1, 1, bp))
        assert abs(v.imag) < 1e-9 and v.real > 0


def test_curly_t_trivial_bprime_is_kloosterman_product():
    p = CharSumParams(1, 3, 1, 1, 1, -1)
    for ell, n, h1, h2 in [(0, 1, 1, 2), (2, 5, 0, 4), (1, 0, 3, 3)]:
        v = curly_t_reduced(ell, n, h1, h2, p)
        expect = kloosterman(h1 + ell, -n, 3) * kloosterman(h2 + ell, -n, 3)
        assert abs(v - expect) < 1e-9
        assert abs(curly_t_brute(ell, n, h1, h2, p) - expect) < 1e-9


@given(
    st.integers(1, 12), st.integers(1, 4), st.sampled_from([1, -1]), st.sampled_from([1, -1]),
    st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50),
)
@settings(max_examples=60, deadline=None)
def test_curly_t_reduced_matches_brute(bp, r0m0, eta1, eta2, ell, n, h1, h2):
    p = CharSumParams(1, r0m0, bp, 1, eta1, eta2)
    a, b = curly_t_brute(ell, n, h1, h2, p), curly_t_reduced(ell, n, h1, h2, p)
    assert abs(a - b) <= 1e-8 * max(1.0, abs(a))


def test_curly_t_depends_on_r0m0_and_rprime_only_through_modulus():
    a = curly_t_brute_grid(1, CharSumParams(2, 3, 4, 1))
    b = curly_t_brute_grid(1, CharSumParams(6, 1, 4, 1))
    c = curly_t_brute_grid(1, CharSumParams(6, 1, 4, 5))
    assert np.max(np.abs(a - b)) < 1e-9 and np.max(np.abs(a - c)) < 1e-9


def test_curly_t_grids_match_scalars():
    p = CharSumParams(1, 2, 6, 1, -1, 1)
    g1, g2 = curly_t_brute_grid(3, p), curly_t_reduced_grid(3, p)
    for n, h1, h2 in [(0, 0, 0), (5, 7, 11), (3, 2, 9)]:
        assert abs(g1[n, h1, h2] - curly_t_brute(3, n, h1, h2, p)) < 1e-9
        assert abs(g2[n, h1, h2] - curly_t_reduced(3, n, h1, h2, p)) < 1e-9


def test_curly_t_bound_audit():
    # |T| / shape is bounded on the sweep; the observed constant is small
    kappa = 0.0
    for bp in range(1, 9):
        for r0m0 in (1, 2, 3):
            p = CharSumParams(1, r0m0, bp)
            b = p.modulus
            r = np.arange(b)
            n, h1, h2 = np.meshgrid(r, r, r, indexing="ij")
            shape = curly_t_bound_shape(n, h1, h2, p)
            kappa = max(kappa, float(np.max(np.abs(curly_t_reduced_grid(0, p)) / shape)))
    assert 0 < kappa <= 4.0


def test_c_sum_examples():
    assert c_sum_brute(0, 0, 1, 1, 1) == pytest.approx(1)
    oracle = sum(
        e((a * 1 - 1 * g) / 4) for a in (1, 3) for g in range(4) if (a * g * 1 - 1) % 4 == 0
    )
    assert abs(c_sum_brute(1, 1, 1, 1, 4) - oracle) < 1e-12
    assert c_sum_closed(1, 1, 3, 1, 5) == pytest.approx(kloosterman(1, -2, 5), abs=1e-12)
    assert abs(c_sum_brute(1, 1, 3, 1, 5) - kloosterman(1, -2, 5)) < 1e-10
    assert c_sum_closed(2, 3, 1, 4, 7, -1) == pytest.approx(kloosterman(2, 12, 7))
    with pytest.raises(NotCoprime):
        c_sum_closed(1, 1, 5, 1, 10)


@given(st.integers(1, 40), st.integers(-99, 99), st.integers(-99, 99), st.integers(-99, 99), st.integers(1, 30), st.sampled_from([1, -1]))
@settings(max_examples=80, deadline=None)
def test_c_sum_closed_property(c, n, d, q2, q1, sign):
    if math.gcd(c, q1) != 1:
        return
    assert abs(c_sum_brute(n, d, q1, q2, c, sign) - c_sum_closed(n, d, q1, q2, c, sign)) < 1e-10
