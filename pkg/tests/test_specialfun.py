"""Jacobi evaluation against the explicit series, plus the branch helpers."""

import numpy as np
import pytest

from diracpt.exceptions import BranchAnchorError
from diracpt.numerics import Grid
from diracpt.specialfun import (
    JacobiParams,
    arctan_by_integration,
    binomial_complex,
    jacobi,
    jacobi_series,
    phase_continuous_log,
    phase_continuous_power,
)


def test_binomials():
    assert binomial_complex(5, 2) == pytest.approx(10)
    assert binomial_complex(1j, 0) == 1
    z = 0.3 - 2.1j
    assert binomial_complex(z, 1) == pytest.approx(z)
    # C(z,2) = z(z-1)/2
    assert binomial_complex(z, 2) == pytest.approx(z * (z - 1) / 2)


def test_p0_is_one(rng):
    for _ in range(5):
        a = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        b = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        y = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        assert jacobi(0, a, b, y) == 1.0


def test_p1_legendre_point():
    assert jacobi(1, 0.0, 0.0, 0.3) == pytest.approx(0.3, abs=1e-15)


def test_p2_complex_params_vs_series():
    val = jacobi(2, 1j, -1j, 0.5)
    ref = jacobi_series(2, 1j, -1j, 0.5)
    assert abs(val - ref) < 1e-12


def test_recurrence_vs_series_200_draws(rng):
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(0, 7))
        a = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        b = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        y = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        r = jacobi(n, a, b, y)
        s = jacobi_series(n, a, b, y)
        worst = max(worst, abs(r - s) / max(1.0, abs(s)))
    assert worst < 1e-10


def test_reflection_symmetry(rng):
    for _ in range(20):
        n = int(rng.integers(0, 6))
        a = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        b = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        y = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        lhs = jacobi(n, a, b, -y)
        rhs = (-1.0) ** n * jacobi(n, b, a, y)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_degenerate_recurrence_falls_back_to_series():
    # alpha + beta = -2 makes the m=2 leading coefficient vanish
    y = 0.37 - 0.21j
    assert abs(jacobi(2, 1.0, -3.0, y) - jacobi_series(2, 1.0, -3.0, y)) < 1e-12


def test_jacobi_params_container():
    p = JacobiParams(2, 1j - 3, -1j - 3)
    assert p.n == 2
    with pytest.raises(ValueError):
        JacobiParams(-1, 0, 0)


def test_power_real_positive_base():
    g = Grid(0.1, 3.0, 64)
    base = g.x.astype(complex)
    out = phase_continuous_power(base, 1.7)
    assert np.max(np.abs(out - g.x ** 1.7)) < 1e-14 * np.max(g.x ** 1.7)


def test_power_winding_phase_stays_continuous():
    g = Grid(0.0, 1.0, 512)
    theta = 4 * np.pi * g.x  # winds twice
    base = np.exp(1j * theta)
    out = phase_continuous_power(base, 0.5 + 0.2j)
    log = phase_continuous_log(base)
    jumps = np.abs(np.diff(np.imag(log)))
    assert np.max(jumps) < np.pi
    # exponent * continuous log reproduces exp(i theta/2) up to the |.| factor
    assert np.max(np.abs(out - np.exp((0.5 + 0.2j) * 1j * theta))) < 1e-10


def test_power_cosecant_identity():
    # (y^2 - 1)^(-s/2) with y = i cot x has modulus sin(x)^s
    g = Grid(1e-2, np.pi - 1e-2, 1001)
    y = 1j * np.cos(g.x) / np.sin(g.x)
    anchor = g.n // 2
    out = phase_continuous_power(y * y - 1.0, -1.0, anchor)  # s = 2
    assert np.max(np.abs(np.abs(out) - np.sin(g.x) ** 2)) < 1e-12


def test_power_zero_base_raises():
    base = np.array([1.0, 0.0, 1.0], dtype=complex)
    with pytest.raises(BranchAnchorError):
        phase_continuous_power(base, 0.5)


def test_arctan_real_axis():
    g = Grid(-5.0, 5.0, 2001)
    out = arctan_by_integration(g.x.astype(complex), np.ones(g.n, complex), g)
    assert np.max(np.abs(out - np.arctan(g.x))) < 1e-10


def test_arctan_imaginary_argument_is_artanh():
    # arctan(i z) = i artanh(z) on |z| < 1 (away from the z = 1 pole, where
    # fixed-grid quadrature would need local refinement)
    half = float(np.arcsinh(0.8))
    g = Grid(-half, half, 2001)
    y = 1j * np.sinh(g.x)
    out = arctan_by_integration(y, 1j * np.cosh(g.x), g)
    ref = 1j * np.arctanh(np.sinh(g.x))
    assert np.max(np.abs(out - ref)) < 1e-10
    assert np.max(np.abs(out.real)) < 1e-10


def test_arctan_constant_argument():
    g = Grid(0.0, 2.0, 64)
    y = np.full(g.n, 0.7 + 0.0j)
    out = arctan_by_integration(y, np.zeros(g.n, complex), g)
    assert np.max(np.abs(out - np.arctan(0.7))) < 1e-14
