"""First-order system algebra: basis maps, reconstruction, residuals,
the ky = 0 closed form and the mass-coupling transform."""

import numpy as np
import pytest

from diracpt.exceptions import UndefinedResidualError
from diracpt.numerics import Grid, cumulative_integral
from diracpt.potentials import (
    LorentzScalar,
    RosenMorseCot,
    ShiftedParabola,
    effective_potential,
    eval_potential,
    rosen_morse_levels,
    rosen_morse_wavefunction,
    zero_mode,
)
from diracpt.spinor import (
    LORENTZ_T,
    SpinorField,
    dirac_residual,
    from_pm_basis,
    ky_zero_solution,
    lorentz_residual,
    lorentz_transform,
    reconstruct_minus,
    reconstruct_plus,
    spin_flip,
    to_pm_basis,
    transformed_components,
)

ZERO_U = lambda x: np.zeros_like(x, dtype=complex)


def _random_spinor(rng, grid, ky=0.7, eps=1.1):
    a = rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n)
    b = rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n)
    return SpinorField(grid, a, b, ky=ky, eps=eps)


def _free_spinor(grid, eps=2.0, ky=1.0):
    kappa = np.sqrt(eps ** 2 - ky ** 2)
    pm = np.exp(1j * kappa * grid.x)
    pp = 1j * (kappa - eps) / ky * pm
    return from_pm_basis(pp, pm, grid, ky, eps)


def test_pm_basis_roundtrip(rng):
    g = Grid(-3.0, 3.0, 257)
    s = _random_spinor(rng, g)
    pp, pm = to_pm_basis(s)
    s2 = from_pm_basis(pp, pm, g, s.ky, s.eps)
    assert np.max(np.abs(s2.psi_a - s.psi_a)) < 1e-15 * max(1, s.norm)
    assert np.max(np.abs(s2.psi_b - s.psi_b)) < 1e-15 * max(1, s.norm)


def test_pm_basis_symmetric_spinors(rng):
    g = Grid(-3.0, 3.0, 64)
    a = rng.normal(size=g.n) + 1j * rng.normal(size=g.n)
    pp, pm = to_pm_basis(SpinorField(g, a, a.copy()))
    assert np.max(np.abs(pp)) == 0.0
    assert np.allclose(pm, 2 * a)
    pp2, pm2 = to_pm_basis(SpinorField(g, a, -a))
    assert np.max(np.abs(pm2)) == 0.0


def test_reconstruct_plus_free_particle():
    g = Grid(-5.0, 5.0, 3501)
    eps, ky = 2.0, 1.0
    kappa = np.sqrt(eps ** 2 - ky ** 2)
    pm = np.exp(1j * kappa * g.x)
    pp = reconstruct_plus(pm, ZERO_U, eps, ky, g)
    assert np.max(np.abs(pp - 1j * (kappa - eps) / ky * pm)) < 1e-8
    s = from_pm_basis(pp, pm, g, ky, eps)
    r1, r2 = dirac_residual(s, ZERO_U)
    assert max(r1, r2) < 1e-10


def test_reconstruct_zero_input_and_ky_zero_guard():
    g = Grid(-5.0, 5.0, 512)
    zeros = np.zeros(g.n, dtype=complex)
    assert np.max(np.abs(reconstruct_plus(zeros, ZERO_U, 1.0, 0.5, g))) == 0.0
    with pytest.raises(ZeroDivisionError):
        reconstruct_plus(zeros, ZERO_U, 1.0, 0.0, g)
    with pytest.raises(ZeroDivisionError):
        reconstruct_minus(zeros, ZERO_U, 1.0, 0.0, g)


def test_reconstruct_rosen_morse_level():
    v0, ky = 2.0, 1.0
    spec = RosenMorseCot(v0)
    g = Grid(1e-3, np.pi - 1e-3, 4001)
    lev = rosen_morse_levels(v0, ky, [1])[0]
    pm = rosen_morse_wavefunction(lev, g)
    pp = reconstruct_plus(pm, spec, lev.eps, ky, g)
    s = from_pm_basis(pp, pm, g, ky, lev.eps)
    r1, r2 = dirac_residual(s, spec)
    assert max(r1, r2) < 1e-6


def test_dirac_residual_detects_corruption():
    g = Grid(-5.0, 5.0, 2001)
    s = _free_spinor(g)
    bad = SpinorField(g, s.psi_a, 1.01 * s.psi_b, s.ky, s.eps)
    r1, r2 = dirac_residual(bad, ZERO_U)
    assert max(r1, r2) > 1e-3


def test_dirac_residual_zero_spinor_raises():
    g = Grid(-1.0, 1.0, 64)
    z = np.zeros(g.n, dtype=complex)
    with pytest.raises(UndefinedResidualError):
        dirac_residual(SpinorField(g, z, z), ZERO_U)


def test_spin_flip_involution_and_invariance(rng):
    g = Grid(-5.0, 5.0, 1001)
    s = _random_spinor(rng, g, ky=0.9, eps=0.4)
    ss = spin_flip(spin_flip(s))
    assert np.array_equal(ss.psi_a, s.psi_a)
    assert np.array_equal(ss.psi_b, s.psi_b)
    assert ss.ky == s.ky
    # residual pair swaps exactly under the flip, solution or not
    u = lambda x: np.tanh(x) + 0.2j / np.cosh(x)
    r = dirac_residual(s, u)
    rf = dirac_residual(spin_flip(s), u)
    assert abs(rf[0] - r[1]) <= 1e-12 * max(1.0, r[1])
    assert abs(rf[1] - r[0]) <= 1e-12 * max(1.0, r[0])


def test_spin_flip_fixed_point_at_ky_zero():
    g = Grid(-2.0, 2.0, 128)
    a = np.exp(1j * g.x)
    s = SpinorField(g, a, a.copy(), ky=0.0, eps=0.5)
    f = spin_flip(s)
    assert np.array_equal(f.psi_a, s.psi_b)
    assert f.ky == 0.0


def test_ky_zero_solution_real_potential_flat_modulus():
    g = Grid(-5.0, 5.0, 2001)
    s = ky_zero_solution(lambda x: np.cos(x) + 0j, 0.3, "minus", g)
    assert np.max(np.abs(np.abs(s.psi_a) - 1.0)) < 1e-12
    assert np.array_equal(s.psi_b, s.psi_a)  # minus branch: psi_B = +psi_A


def test_ky_zero_solution_rosen_morse_sine_power():
    v0 = 2.0
    g = Grid(1e-3, np.pi - 1e-3, 4001)
    s = ky_zero_solution(RosenMorseCot(v0), 0.0, "minus", g)
    sl = slice(200, -200)  # quadrature near the log-singular walls is softer
    ratio = np.abs(s.psi_a[sl]) / np.sin(g.x[sl]) ** v0
    assert np.max(np.abs(ratio / ratio[len(ratio) // 2] - 1.0)) < 1e-6
    r1, r2 = dirac_residual(s, RosenMorseCot(v0))
    assert max(r1, r2) < 1e-6


def test_ky_zero_solution_matches_parabola_zero_mode():
    g = Grid(-8.0, 8.0, 4001)
    spec = ShiftedParabola(1.0)
    s = ky_zero_solution(spec, 0.0, "minus", g)
    zm = zero_mode(spec, g).entries[0].psi
    ratio = s.psi_a / zm
    mid = ratio[g.n // 2]
    assert np.max(np.abs(ratio - mid)) < 1e-10 * abs(mid)


def test_ky_zero_solution_branch_signs():
    g = Grid(-4.0, 4.0, 512)
    plus = ky_zero_solution(ZERO_U, 1.0, "plus", g)
    assert np.array_equal(plus.psi_b, -plus.psi_a)
    pp, pm = to_pm_basis(plus)
    assert np.max(np.abs(pm)) < 1e-15  # carries psi_+ only


def test_lorentz_transform_unitary(rng):
    g = Grid(-3.0, 3.0, 513)
    f = _random_spinor(rng, g, ky=0.5, eps=0.0)
    t = lorentz_transform(f)
    n_before = np.abs(f.psi_a) ** 2 + np.abs(f.psi_b) ** 2
    n_after = np.abs(t.psi_a) ** 2 + np.abs(t.psi_b) ** 2
    assert np.max(np.abs(n_before - n_after)) < 1e-15 * np.max(n_before)
    assert np.max(np.abs(LORENTZ_T.conj().T @ LORENTZ_T - np.eye(2))) < 1e-15


def test_lorentz_transform_free_solution_satisfies_pair():
    g = Grid(-5.0, 5.0, 2001)
    kx, ky = 1.2, 0.5
    e_dirac = np.sqrt(kx ** 2 + ky ** 2)
    f_minus = np.exp(1j * kx * g.x)
    f_plus = (kx + 1j * ky) / e_dirac * f_minus
    t = lorentz_transform(SpinorField(g, f_minus, f_plus, ky, e_dirac))
    pm, pp = transformed_components(t)
    r1, r2 = lorentz_residual(pm, pp, ZERO_U, e_dirac, ky, g)
    assert max(r1, r2) < 1e-8


def test_lorentz_residual_factorized_ground_state():
    spec = LorentzScalar("scarf2", 3.0, 1.0, 0.0)
    g = Grid(-12.0, 12.0, 4001)
    w = eval_potential(spec, g.x)
    psi_minus = np.exp(-cumulative_integral(w, g, g.n // 2))
    for ky in (0.0, 0.8):
        r1, r2 = lorentz_residual(psi_minus, np.zeros(g.n, complex), spec,
                                  ky, ky, g)
        assert max(r1, r2) < 1e-6


def test_lorentz_residual_mirror_zero_mode():
    # A < 0 makes exp(+int W) the normalizable branch; at E = ky = 0 it
    # solves (-d/dx + W) psi_+ = 0 with psi_- = 0
    spec = LorentzScalar("scarf2", -2.0, 0.5, 0.3)
    g = Grid(-12.0, 12.0, 4001)
    w = eval_potential(spec, g.x)
    psi_plus = np.exp(+cumulative_integral(w, g, g.n // 2))
    r1, r2 = lorentz_residual(np.zeros(g.n, complex), psi_plus, spec,
                              0.0, 0.0, g)
    assert max(r1, r2) < 1e-8


def test_lorentz_residual_zero_input_raises():
    g = Grid(-1.0, 1.0, 64)
    z = np.zeros(g.n, complex)
    with pytest.raises(UndefinedResidualError):
        lorentz_residual(z, z, ZERO_U, 1.0, 0.0, g)


def test_first_and_second_order_residuals_converge_together():
    # discretization orders of the coupled-pair and decoupled-equation
    # residuals match under grid refinement (both stencil-limited)
    v0, ky = 2.0, 1.0
    spec = RosenMorseCot(v0)
    lev = rosen_morse_levels(v0, ky, [1])[0]

    def residuals(n):
        g = Grid(0.05, np.pi - 0.05, n)
        pm = rosen_morse_wavefunction(lev, g)
        pp = reconstruct_plus(pm, spec, lev.eps, ky, g)
        s = from_pm_basis(pp, pm, g, ky, lev.eps)
        r1, _ = dirac_residual(s, spec)
        from diracpt.numerics import schrodinger_residual
        rs = schrodinger_residual(
            pm, lambda x: effective_potential(spec, lev.eps, ky, "minus", x), g)
        return r1, rs

    r1a, rsa = residuals(501)
    r1b, rsb = residuals(1001)
    order_first = np.log2(r1a / r1b)
    order_second = np.log2(rsa / rsb)
    assert 3.0 < order_first < 5.2
    assert 3.0 < order_second < 5.2
    assert abs(order_first - order_second) < 1.2
