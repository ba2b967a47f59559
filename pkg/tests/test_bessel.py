import math

import numpy as np
import pytest
import mpmath
from scipy import special

from shiftconv.bessel import bessel_j, hankel_switch


def test_values_at_origin():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(11, 0.0) == 0.0


def test_j11_at_5_integral_representation():
    mpmath.mp.dps = 30
    val = mpmath.quad(lambda t: mpmath.cos(11 * t - 5 * mpmath.sin(t)), [0, mpmath.pi]) / mpmath.pi
    assert abs(bessel_j(11, 5.0) - float(val)) < 1e-14


@pytest.mark.parametrize("order", [0, 1, 5, 11, 20, 40, 64])
def test_absolute_accuracy_small_arguments(order):
    x = np.linspace(0.0, 50.0, 4001)
    assert np.max(np.abs(bessel_j(order, x) - special.jv(order, x))) <= 1e-12


@pytest.mark.parametrize("order", [0, 7, 11, 30, 64])
def test_relative_accuracy_large_arguments(order):
    # relative to the local envelope, since J has zeros
    x = np.concatenate([np.linspace(50.0, 3000.0, 3000), np.geomspace(3000.0, 1e6, 500)])
    env = np.maximum(np.abs(special.jv(order, x)), np.sqrt(2 / (math.pi * x)))
    assert np.max(np.abs(bessel_j(order, x) - special.jv(order, x)) / env) <= 1e-10


def test_switch_continuity():
    for order in (0, 11, 20, 64):
        s = hankel_switch(order)
        below, above = bessel_j(order, np.nextafter(s, 0)), bessel_j(order, s)
        assert abs(below - above) < 1e-12


def test_three_term_recurrence():
    x = np.linspace(0.1, 100.0, 2000)
    for nu in range(1, 21):
        lhs = bessel_j(nu - 1, x) + bessel_j(nu + 1, x)
        assert np.max(np.abs(lhs - 2 * nu / x * bessel_j(nu, x))) < 1e-9


def test_domain_guards():
    with pytest.raises(ValueError):
        bessel_j(65, 1.0)
    with pytest.raises(ValueError):
        bessel_j(2, -1.0)
    with pytest.raises(ValueError):
        bessel_j(2, 2e6)
    with pytest.raises(ValueError):
        bessel_j(1.5, 1.0)


def test_scalar_and_array_shapes():
    assert isinstance(bessel_j(3, 2.0), float)
    assert bessel_j(3, np.ones((2, 3))).shape == (2, 3)
