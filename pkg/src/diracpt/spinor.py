"""Spinor algebra for the coupled first-order systems.

Scalar coupling: with Psi = e^(i ky y) (psi_A, psi_B) the stationary pair is

    (U - eps) psi_A - i (psi_B' + ky psi_B) = 0,
    (U - eps) psi_B - i (psi_A' - ky psi_A) = 0,

invariant under the spin flip (psi_A <-> psi_B, ky -> -ky).  The +/- basis
psi_+ = psi_A - psi_B, psi_- = psi_A + psi_B decouples into second-order
problems handled by the potential catalog; this module owns the first-order
residuals, component reconstruction and the ky = 0 closed form.

Lorentz-scalar coupling: the container carries (f_-, f_+); a unitary mixing
matrix turns the Dirac equation into the factorized pair

    (d/dx + W) psi_- = (E + ky) psi_+,
    (-d/dx + W) psi_+ = (E - ky) psi_-.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Union

import numpy as np

from .exceptions import UndefinedResidualError
from .numerics import (
    RESIDUAL_BOUNDARY_TRIM,
    Grid,
    cumulative_integral,
    differentiate,
)
from . import potentials as _pot

PotentialLike = Union["_pot.PotentialSpec", Callable, np.ndarray]


def _sample_u(u: PotentialLike, x: np.ndarray) -> np.ndarray:
    if isinstance(u, np.ndarray):
        if u.shape[-1] != x.shape[-1]:
            raise ValueError("sampled potential does not match the grid")
        return u.astype(complex)
    if callable(u):  # plain sampler; catalog specs are data, not callables
        return np.asarray(u(x), dtype=complex)
    return np.asarray(_pot.eval_potential(u, x), dtype=complex)


@dataclass(frozen=True)
class SpinorField:
    """Sampled two-component complex wavefunction with its (ky, eps) labels.

    Scalar problems store (psi_A, psi_B); Lorentz problems reuse the same
    container for (f_-, f_+).
    """

    grid: Grid
    psi_a: np.ndarray
    psi_b: np.ndarray
    ky: float = 0.0
    eps: float = 0.0

    def __post_init__(self):
        if len(self.psi_a) != self.grid.n or len(self.psi_b) != self.grid.n:
            raise ValueError("component length does not match grid size")

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.linalg.norm(self.psi_a) ** 2
                             + np.linalg.norm(self.psi_b) ** 2))


def to_pm_basis(s: SpinorField) -> tuple[np.ndarray, np.ndarray]:
    """(psi_plus, psi_minus) = (psi_A - psi_B, psi_A + psi_B)."""
    return s.psi_a - s.psi_b, s.psi_a + s.psi_b


def from_pm_basis(psi_plus: np.ndarray, psi_minus: np.ndarray, grid: Grid,
                  ky: float = 0.0, eps: float = 0.0) -> SpinorField:
    """Inverse of :func:`to_pm_basis`."""
    psi_a = (np.asarray(psi_plus) + np.asarray(psi_minus)) / 2.0
    psi_b = (np.asarray(psi_minus) - np.asarray(psi_plus)) / 2.0
    return SpinorField(grid=grid, psi_a=psi_a, psi_b=psi_b, ky=ky, eps=eps)


def spin_flip(s: SpinorField) -> SpinorField:
    """Swap the components and negate ky; an involution on solutions."""
    return replace(s, psi_a=s.psi_b, psi_b=s.psi_a, ky=-s.ky)


def reconstruct_plus(psi_minus: np.ndarray, u: PotentialLike, eps: float,
                     ky: float, grid: Grid) -> np.ndarray:
    """psi_+ = [i (U - eps) psi_- + psi_-'] / ky  (needs ky != 0).

    At ky = 0 the components decouple; use :func:`ky_zero_solution` there.
    """
    if ky == 0.0:
        raise ZeroDivisionError(
            "psi_+ reconstruction divides by ky; use the ky = 0 closed form")
    uu = _sample_u(u, grid.x)
    psi_minus = np.asarray(psi_minus, dtype=complex)
    return (1j * (uu - eps) * psi_minus
            + differentiate(psi_minus, grid, order=1)) / ky


def reconstruct_minus(psi_plus: np.ndarray, u: PotentialLike, eps: float,
                      ky: float, grid: Grid) -> np.ndarray:
    """psi_- = [-i (U - eps) psi_+ + psi_+'] / ky  (needs ky != 0)."""
    if ky == 0.0:
        raise ZeroDivisionError(
            "psi_- reconstruction divides by ky; use the ky = 0 closed form")
    uu = _sample_u(u, grid.x)
    psi_plus = np.asarray(psi_plus, dtype=complex)
    return (-1j * (uu - eps) * psi_plus
            + differentiate(psi_plus, grid, order=1)) / ky


def ky_zero_solution(u: PotentialLike, eps: float, branch: str,
                     grid: Grid) -> SpinorField:
    """Closed-form ky = 0 spinor.

    ``branch='minus'`` returns the solution carrying the psi_- content
    (psi_A = exp(-i int (U - eps)), psi_B = +psi_A); ``branch='plus'`` the
    psi_+ carrier (opposite exponent sign, psi_B = -psi_A).  The exponent is
    a cumulative integral anchored at mid-grid; normalization is free.
    """
    if branch not in ("minus", "plus"):
        raise ValueError("branch must be 'minus' or 'plus'")
    sgn = -1.0 if branch == "minus" else 1.0
    uu = _sample_u(u, grid.x)
    phase = cumulative_integral(uu - eps, grid, grid.n // 2)
    psi_a = np.exp(sgn * 1j * phase)
    psi_b = -sgn * psi_a
    return SpinorField(grid=grid, psi_a=psi_a, psi_b=psi_b, ky=0.0, eps=eps)


def _relative_residual(lhs_1: np.ndarray, lhs_2: np.ndarray,
                       comp_1: np.ndarray, comp_2: np.ndarray, grid: Grid,
                       scale: float, trim: int) -> tuple[float, float]:
    sl = grid.interior(trim)
    denom = np.sqrt(np.linalg.norm(comp_1[sl]) ** 2
                    + np.linalg.norm(comp_2[sl]) ** 2) * scale
    if denom == 0.0:
        raise UndefinedResidualError("residual of an identically-zero spinor")
    return (float(np.linalg.norm(lhs_1[sl]) / denom),
            float(np.linalg.norm(lhs_2[sl]) / denom))


def dirac_residual(s: SpinorField, u: PotentialLike,
                   trim: int = RESIDUAL_BOUNDARY_TRIM) -> tuple[float, float]:
    """Relative interior L2 norms of the two coupled first-order equations.

    Normalization is ||LHS|| / (||(psi_A, psi_B)|| * (1 + |eps| + |ky|)),
    which keeps the metric scale-free across families.
    """
    if not (np.any(s.psi_a) or np.any(s.psi_b)):
        raise UndefinedResidualError("residual of an identically-zero spinor")
    uu = _sample_u(u, s.grid.x)
    da = differentiate(s.psi_a, s.grid, order=1)
    db = differentiate(s.psi_b, s.grid, order=1)
    lhs1 = (uu - s.eps) * s.psi_a - 1j * (db + s.ky * s.psi_b)
    lhs2 = (uu - s.eps) * s.psi_b - 1j * (da - s.ky * s.psi_a)
    scale = 1.0 + abs(s.eps) + abs(s.ky)
    return _relative_residual(lhs1, lhs2, s.psi_a, s.psi_b, s.grid, scale, trim)


# ---------------------------------------------------------------------------
# Lorentz-scalar coupling
# ---------------------------------------------------------------------------

#: Unitary mixing matrix: T = (1/sqrt2) [[1, i], [i, 1]].
LORENTZ_T = np.array([[1.0, 1j], [1j, 1.0]]) / np.sqrt(2.0)


def lorentz_transform(f: SpinorField) -> SpinorField:
    """Apply T^dagger to the (f_-, f_+) container, giving (i psi_-, psi_+).

    Pointwise unitary, so the 2-norm of the components is preserved sample
    by sample.
    """
    td = LORENTZ_T.conj().T
    out_a = td[0, 0] * f.psi_a + td[0, 1] * f.psi_b
    out_b = td[1, 0] * f.psi_a + td[1, 1] * f.psi_b
    return replace(f, psi_a=out_a, psi_b=out_b)


def transformed_components(t: SpinorField) -> tuple[np.ndarray, np.ndarray]:
    """Extract (psi_-, psi_+) from a transformed spinor (i psi_-, psi_+)."""
    return -1j * t.psi_a, t.psi_b


def lorentz_residual(psi_minus: np.ndarray, psi_plus: np.ndarray,
                     w: PotentialLike, e_dirac: float, ky: float, grid: Grid,
                     trim: int = RESIDUAL_BOUNDARY_TRIM) -> tuple[float, float]:
    """Residuals of the factorized pair for the position-dependent-mass case.

    r1 checks (d/dx + W) psi_- = (E + ky) psi_+, r2 the partner equation.
    """
    psi_minus = np.asarray(psi_minus, dtype=complex)
    psi_plus = np.asarray(psi_plus, dtype=complex)
    if not (np.any(psi_minus) or np.any(psi_plus)):
        raise UndefinedResidualError("residual of an identically-zero spinor")
    ww = _sample_u(w, grid.x)
    lhs1 = (differentiate(psi_minus, grid, order=1) + ww * psi_minus
            - (e_dirac + ky) * psi_plus)
    lhs2 = (-differentiate(psi_plus, grid, order=1) + ww * psi_plus
            - (e_dirac - ky) * psi_minus)
    scale = 1.0 + abs(e_dirac) + abs(ky)
    return _relative_residual(lhs1, lhs2, psi_minus, psi_plus, grid, scale, trim)
