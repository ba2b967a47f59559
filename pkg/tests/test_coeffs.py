import math

import numpy as np
import pytest

from shiftconv.arith import divisor_count_sieve, factorize
from shiftconv.coeffs import (
    build_gl2_table,
    build_sym2_table,
    gl2_coeff,
    lam_extended,
    load_or_build_gl2,
    ramanujan_tau_list,
    ramanujan_tau_naive,
    rankin_selberg_ratio,
    read_coeff_cache,
    write_coeff_cache,
)
from shiftconv.errors import InsufficientSourceTable, OutOfRange
from shiftconv.verify import schur_coefficient


@pytest.fixture(scope="module")
def gl2():
    return build_gl2_table(10**5, keep_exact=True)


def test_tau_matches_naive_product():
    assert ramanujan_tau_list(400) == ramanujan_tau_naive(400)


def test_tau_known_values(gl2):
    assert gl2.tau[1:6] == (1, -24, 252, -1472, 4830)
    assert gl2.tau[6] == gl2.tau[2] * gl2.tau[3]


def test_normalized_values(gl2):
    assert gl2_coeff(gl2, 1) == 1.0
    assert gl2_coeff(gl2, 2) == pytest.approx(-24 / 2**5.5, abs=1e-15)
    assert gl2_coeff(gl2, 2) == pytest.approx(-0.530330, abs=1e-6)
    assert gl2_coeff(gl2, 4) == pytest.approx(-0.71875, abs=1e-15)
    with pytest.raises(OutOfRange):
        gl2_coeff(gl2, 10**5 + 1)
    with pytest.raises(OutOfRange):
        gl2_coeff(gl2, 0)
    assert not gl2.lam.flags.writeable


def test_exact_integer_hecke_relations(gl2):
    # tau(p) tau(p^k) = tau(p^(k+1)) + p^11 tau(p^(k-1)) in exact integers
    tau = gl2.tau
    for p in (2, 3, 5, 7, 11, 13):
        k = 1
        while p ** (k + 1) <= gl2.bound:
            assert tau[p] * tau[p**k] == tau[p ** (k + 1)] + p**11 * tau[p ** (k - 1)]
            k += 1


def test_multiplicativity_and_divisor_bound(gl2):
    lam = gl2.lam
    rng = np.random.default_rng(0)
    m = rng.integers(1, 300, 4000)
    n = rng.integers(1, 300, 4000)
    ok = np.gcd(m, n) == 1
    assert np.max(np.abs(lam[m[ok] * n[ok]] - lam[m[ok]] * lam[n[ok]])) < 1e-12
    assert np.all(np.abs(lam[1:]) <= divisor_count_sieve(gl2.bound)[1:])


def test_lam_extended_zero_for_nonpositive(gl2):
    assert list(lam_extended(gl2, [-3, 0, 1])) == [0.0, 0.0, 1.0]


def test_build_guards():
    with pytest.raises(ValueError):
        build_gl2_table(0)
    with pytest.raises(ValueError):
        build_gl2_table(10**7 + 1)


@pytest.fixture(scope="module")
def gl3(gl2):
    return build_sym2_table(gl2, 50, 10**4)


def test_sym2_examples(gl2, gl3):
    assert gl3.coeff(1, 1) == 1.0
    assert gl3.coeff(1, 2) == pytest.approx(gl2.lam[4], abs=1e-15)
    assert gl3.coeff(2, 2) == pytest.approx(schur_coefficient(gl2, 2, 2), abs=1e-13)
    assert gl3.langlands == (11.0, 0.0, -11.0)


def test_sym2_row_is_lambda_of_square(gl2, gl3):
    # A(1, n) = sum_{d^2 | n} lambda(n^2/d^4) ... checked at primes: A(1,p) = lambda(p^2)
    for p in (2, 3, 5, 7, 97, 211):
        assert gl3.coeff(1, p) == pytest.approx(gl2.lam[p * p], abs=1e-12)
        assert abs(gl3.coeff(1, p)) <= 3.0


def test_sym2_symmetry_and_schur(gl2, gl3):
    for m in range(1, 51):
        for n in range(1, 51):
            assert gl3.A[m, n] == pytest.approx(gl3.A[n, m], abs=1e-12)
    for m, n in [(4, 6), (12, 18), (8, 8), (30, 45), (49, 7)]:
        assert gl3.coeff(m, n) == pytest.approx(schur_coefficient(gl2, m, n), abs=1e-10)


def test_rank3_hecke_recursion(gl3):
    # Pieri: A(1,p) A(1,p^k) = A(1,p^(k+1)) + A(p,p^(k-1))
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        k = 1
        while p ** (k + 1) <= 10**4:
            lhs = gl3.A[1, p] * gl3.A[1, p**k]
            rhs = gl3.A[1, p ** (k + 1)] + gl3.A[p, p ** (k - 1)]
            assert lhs == pytest.approx(rhs, abs=1e-9)
            k += 1


def test_sym2_needs_source(gl2):
    small = build_gl2_table(10)
    with pytest.raises(InsufficientSourceTable):
        build_sym2_table(small, 5, 20)


def test_rankin_selberg(gl2):
    t = build_sym2_table(gl2, 1, 10**5)
    assert rankin_selberg_ratio(t, 1) == 1.0
    assert 0.1 <= rankin_selberg_ratio(t, 1000) <= 10
    Ns = np.geomspace(1e3, 1e5, 9).astype(int)
    partial = [rankin_selberg_ratio(t, int(N)) * N for N in Ns]
    slope = np.polyfit(np.log(Ns), np.log(partial), 1)[0]
    assert abs(slope - 1.0) <= 0.15
    with pytest.raises(OutOfRange):
        rankin_selberg_ratio(t, 10**5 + 1)


def test_cache_roundtrip(tmp_path, gl2):
    path = tmp_path / "lam.bin"
    write_coeff_cache(path, gl2)
    assert path.read_bytes()[:5] == b"SCLB1"
    back = read_coeff_cache(path)
    assert back.bound == gl2.bound and back.weight == 12
    assert np.array_equal(back.lam, gl2.lam)
    # a large enough cache is reused, a short one is rebuilt and rewritten
    assert load_or_build_gl2(500, path).bound == gl2.bound
    small = tmp_path / "small.bin"
    write_coeff_cache(small, build_gl2_table(50))
    assert load_or_build_gl2(200, small).bound == 200
    assert read_coeff_cache(small).bound == 200
    (tmp_path / "junk.bin").write_bytes(b"nope")
    with pytest.raises(ValueError):
        read_coeff_cache(tmp_path / "junk.bin")
